#include "gwasym/table_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gwasym {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw CacheCorruptError("bad floating-point field: " + s);
    }
    return v;
}

std::string header_line(const InvariantTable& t, const char* kind, int dmax,
                        const std::string& payload) {
    std::ostringstream os;
    os << "# gwasym-table v1 genus=" << t.genus << " kind=" << kind << " dmax=" << dmax
       << " precision_bits=" << (std::string(kind) == "scaled" ? t.precision_bits : 0)
       << " fnv=" << std::hex << fnv1a64(payload);
    return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
    }
    fs::rename(tmp, target);
}

} // namespace

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : data) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string exact_table_text(const InvariantTable& t, int dmax) {
    if (dmax < 1 || dmax > t.dmax_exact()) {
        throw std::invalid_argument("exact_table_text: dmax outside the table");
    }
    std::ostringstream payload;
    for (int d = 1; d <= dmax; ++d) {
        const Rat& q = t.exact[static_cast<size_t>(d)];
        payload << t.genus << ' ' << d << ' ' << numerator(q).str() << ' '
                << denominator(q).str() << '\n';
    }
    std::string body = payload.str();
    return header_line(t, "exact", dmax, body) + "\n" + body;
}

std::string scaled_table_text(const InvariantTable& t, int dmax) {
    if (dmax < 1 || dmax > t.dmax_scaled()) {
        throw std::invalid_argument("scaled_table_text: dmax outside the table");
    }
    std::ostringstream payload;
    for (int d = 1; d <= dmax; ++d) {
        const ScaledValue& sv = t.scaled[static_cast<size_t>(d)];
        payload << t.genus << ' ' << d << ' ' << format_double(sv.log_e) << ' '
                << real_to_hex(sv.mantissa) << ' ' << t.precision_bits << '\n';
    }
    std::string body = payload.str();
    return header_line(t, "scaled", dmax, body) + "\n" + body;
}

void write_exact_table(const std::string& path, const InvariantTable& t, int dmax) {
    atomic_write(path, exact_table_text(t, dmax));
}

void write_scaled_table(const std::string& path, const InvariantTable& t, int dmax) {
    atomic_write(path, scaled_table_text(t, dmax));
}

InvariantTable read_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw CacheCorruptError("empty table file " + path);
    }
    std::istringstream hs(header);
    std::string hash_field, tok;
    int genus = -1, dmax = -1;
    unsigned bits = 0;
    std::string kind;
    while (hs >> tok) {
        auto eat = [&](const char* key) -> const char* {
            size_t n = std::string(key).size();
            return tok.rfind(key, 0) == 0 ? tok.c_str() + n : nullptr;
        };
        if (const char* v = eat("genus=")) genus = std::atoi(v);
        else if (const char* v = eat("kind=")) kind = v;
        else if (const char* v = eat("dmax=")) dmax = std::atoi(v);
        else if (const char* v = eat("precision_bits=")) bits = static_cast<unsigned>(std::atoi(v));
        else if (const char* v = eat("fnv=")) hash_field = v;
    }
    if (genus < 0 || dmax < 1 || kind.empty() || hash_field.empty()) {
        throw CacheCorruptError("malformed table header in " + path);
    }
    std::ostringstream rest;
    rest << in.rdbuf();
    std::string body = rest.str();
    std::ostringstream expect;
    expect << std::hex << fnv1a64(body);
    if (expect.str() != hash_field) {
        throw CacheCorruptError("checksum mismatch in " + path);
    }

    InvariantTable t;
    t.genus = genus;
    std::istringstream lines(body);
    std::string line;
    int count = 0;
    if (kind == "exact") {
        t.exact.assign(static_cast<size_t>(dmax) + 1, Rat(0));
    } else {
        t.scaled.assign(static_cast<size_t>(dmax) + 1, ScaledValue{});
        t.precision_bits = bits;
    }
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int g = 0, d = 0;
        ls >> g >> d;
        if (g != genus || d < 1 || d > dmax) {
            throw CacheCorruptError("record out of range in " + path);
        }
        if (kind == "exact") {
            std::string num, den;
            ls >> num >> den;
            t.exact[static_cast<size_t>(d)] = Rat(Int(num)) / Rat(Int(den));
        } else {
            std::string log_s, hex_s;
            unsigned pb = 0;
            ls >> log_s >> hex_s >> pb;
            ScaledValue sv;
            sv.log_e = parse_double(log_s);
            sv.mantissa = real_from_hex(hex_s, pb);
            t.scaled[static_cast<size_t>(d)] = sv;
        }
        ++count;
    }
    if (count != dmax) {
        throw CacheCorruptError("record count mismatch in " + path);
    }
    return t;
}

void merge_scaled(InvariantTable& dst, InvariantTable&& src) {
    if (dst.genus != src.genus) {
        throw std::invalid_argument("merge_scaled: genus mismatch");
    }
    dst.scaled = std::move(src.scaled);
    dst.precision_bits = src.precision_bits;
}

} // namespace gwasym
