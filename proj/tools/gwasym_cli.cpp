// Command-line front end: computes and caches invariant tables, locates the
// generating-function singularity, assembles the asymptotic models, and runs
// the verification suites. Batch-oriented; all outputs are deterministic for
// a fixed configuration.

#include "gwasym/asymptotics.hpp"
#include "gwasym/f0_evaluator.hpp"
#include "gwasym/invariants.hpp"
#include "gwasym/ode_flow.hpp"
#include "gwasym/run_config.hpp"
#include "gwasym/singularity.hpp"
#include "gwasym/table_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace gwasym;

std::string exact_cache_path(const RunConfig& c, int genus) {
    return c.cache_dir + "/g" + std::to_string(genus) + "_exact.tbl";
}

std::string scaled_cache_path(const RunConfig& c, int genus) {
    return c.cache_dir + "/g" + std::to_string(genus) + "_scaled_p" +
           std::to_string(c.precision_bits) + ".tbl";
}

std::string report_cache_path(const RunConfig& c) {
    return c.cache_dir + "/singularity_p" + std::to_string(c.precision_bits) + ".json";
}

std::optional<InvariantTable> try_read(const std::string& path) {
    if (!fs::exists(path)) {
        return std::nullopt;
    }
    try {
        return read_table_file(path);
    } catch (const CacheCorruptError& e) {
        std::cerr << "warning: " << e.what() << "; recomputing\n";
        return std::nullopt;
    }
}

// Exact tables, cache-backed. Recomputes and rewrites when the cache is
// shorter than requested; cached prefixes are identical by determinism.
InvariantTable ensure_exact(const RunConfig& c, int genus, int dmax) {
    std::string path = exact_cache_path(c, genus);
    auto cached = try_read(path);
    if (cached && cached->genus == genus && cached->dmax_exact() >= dmax) {
        return std::move(*cached);
    }
    InvariantTable t;
    if (genus == 0) {
        t = genus0_table(dmax);
    } else {
        InvariantTable g0 = ensure_exact(c, 0, dmax);
        t = genus1_table(dmax, g0);
    }
    write_exact_table(path, t, dmax);
    return t;
}

InvariantTable ensure_with_scaled(const RunConfig& c, int genus, int d_exact, int d_scaled) {
    InvariantTable t = ensure_exact(c, genus, d_exact);
    std::string path = scaled_cache_path(c, genus);
    auto cached = try_read(path);
    if (cached && cached->genus == genus && cached->dmax_scaled() >= d_scaled &&
        cached->precision_bits == c.precision_bits) {
        merge_scaled(t, std::move(*cached));
        return t;
    }
    if (genus == 0) {
        extend_scaled(t, d_scaled, c.precision_bits);
    } else {
        InvariantTable g0 = ensure_with_scaled(c, 0, d_exact, d_scaled);
        extend_scaled(t, d_scaled, c.precision_bits, &g0);
    }
    write_scaled_table(path, t, d_scaled);
    return t;
}

SingularityReport ensure_report(const RunConfig& c, bool* fresh = nullptr) {
    std::string path = report_cache_path(c);
    if (fs::exists(path)) {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            SingularityReport r = report_from_json(buf.str());
            if (r.precision_bits == c.precision_bits && r.n_terms >= c.n_terms) {
                if (fresh) *fresh = false;
                return r;
            }
        } catch (const std::exception& e) {
            std::cerr << "warning: unreadable singularity report (" << e.what()
                      << "); recomputing\n";
        }
    }
    InvariantTable g0 = ensure_with_scaled(c, 0, c.d_exact, c.d_float);
    SingularityReport r = build_singularity_report(g0, c.singularity_options());
    std::ofstream out(path);
    out << report_to_json(r) << '\n';
    if (fresh) *fresh = true;
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    fs::path p(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

struct CheckList {
    json checks = json::array();
    bool all_pass = true;

    void add(const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
        all_pass = all_pass && pass;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void run_wdvv_suite(const RunConfig& c, CheckList& out) {
    InvariantTable g0 = ensure_exact(c, 0, c.d_exact);
    int order = std::min(60, c.d_exact);
    WdvvResidual res = verify_wdvv_series(g0, order);
    out.add("wdvv_residual_zero", res.zero(),
            res.zero() ? "residual identically zero through order " + std::to_string(order)
                       : "first nonzero residual at order " + std::to_string(res.first_nonzero));
}

void run_bounds_suite(const RunConfig& c, CheckList& out) {
    InvariantTable g0 = ensure_exact(c, 0, c.d_exact);
    auto bad = verify_bounds(g0);
    out.add("sandwich_bounds", bad.empty(),
            bad.empty() ? "no violations through d = " + std::to_string(c.d_exact)
                        : std::to_string(bad.size()) + " violations, first at d = " +
                              std::to_string(bad.front()));
}

void run_asymptotics_suite(const RunConfig& c, CheckList& out) {
    SingularityReport rep = ensure_report(c);
    InvariantTable g0 = ensure_with_scaled(c, 0, c.d_exact, c.d_float);
    InvariantTable g1 = ensure_with_scaled(c, 1, c.d_exact, c.d_float);
    PrecisionScope scope(c.precision_bits);

    out.add("x0_cross_method", rep.x0_cross_diff.convert_to<double>() <= c.x0_cross_tol,
            "flow vs series difference " + fmt(rep.x0_cross_diff.convert_to<double>()));

    // Leading-term window, genus 0: n e^{d x0} d^{7/2} / a0_3 within 1%.
    {
        int lo = std::min(2000, std::max(8, c.d_float / 2));
        double worst = 0;
        for (int d = lo; d <= c.d_float; d += 1) {
            Real ratio =
                exp(g0.log_value(d) + rep.x0 * d + Real(7) / 2 * log(Real(d))) / rep.a0[0];
            double dev = abs(ratio - 1).convert_to<double>();
            if (dev > worst) worst = dev;
        }
        out.add("genus0_leading_ratio", worst <= 0.01,
                "max |ratio - 1| = " + fmt(worst) + " on [" + std::to_string(lo) + ", " +
                    std::to_string(c.d_float) + "]");
    }

    for (int N : {4, 5, 6}) {
        AsymptoticModel m = AsymptoticModel::from_report(rep, 0, N);
        OrderFit fit = residual_order_fit(g0, m, c.d_float / 2, c.d_float);
        double expect = -(N + 0.5);
        out.add("genus0_residual_order_N" + std::to_string(N),
                std::abs(fit.slope - expect) <= 0.25,
                "slope " + fmt(fit.slope) + ", expected " + fmt(expect));
    }

    {
        int lo = std::min(500, std::max(8, c.d_float / 2));
        double worst = 0;
        for (int d = std::max(3, lo); d <= c.d_float; ++d) {
            Real ratio = 48 * Real(d) * exp(g1.log_value(d) + rep.x0 * d);
            double dev = abs(ratio - 1).convert_to<double>();
            if (dev > worst) worst = dev;
        }
        out.add("genus1_leading_ratio", worst <= 0.10,
                "max |48 d e^{d x0} n - 1| = " + fmt(worst));
        OrderFit decay = fit_genus1_gap_decay(g1, rep.x0, lo, c.d_float);
        out.add("genus1_gap_decay", std::abs(decay.slope + 0.5) <= 0.25,
                "slope " + fmt(decay.slope) + ", expected -0.5");
    }

    for (int N : {1, 2}) {
        AsymptoticModel m = AsymptoticModel::from_report(rep, 1, N);
        OrderFit fit = residual_order_fit(g1, m, c.d_float / 2, c.d_float);
        double expect = -(N + 1.5);
        out.add("genus1_residual_order_N" + std::to_string(N),
                std::abs(fit.slope - expect) <= 0.25,
                "slope " + fmt(fit.slope) + ", expected " + fmt(expect));
    }

    {
        RootConvergence rc = root_convergence(g0, g1, rep.x0, c.d_float / 2, c.d_float);
        bool pass = !rc.degenerate && rc.gaps_decreasing && rc.gap0_at_end < 1e-2 &&
                    rc.gap1_at_end < 1e-2 && rc.cross_at_end < 1e-2;
        out.add("root_convergence", pass,
                "end gaps " + fmt(rc.gap0_at_end) + ", " + fmt(rc.gap1_at_end) + ", " +
                    fmt(rc.cross_at_end) + (rc.gaps_decreasing ? ", decreasing" : ", not decreasing"));
    }
}

int cmd_invariants(const RunConfig& c, int genus, int dmax, bool scaled,
                   const std::string& out_path) {
    std::string text;
    if (scaled) {
        InvariantTable t = ensure_with_scaled(c, genus, std::min(dmax, c.d_exact), dmax);
        text = scaled_table_text(t, dmax);
    } else {
        InvariantTable t = ensure_exact(c, genus, dmax);
        text = exact_table_text(t, dmax);
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text(out_path, text);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

int cmd_singularity(const RunConfig& c, const std::string& out_path) {
    SingularityReport rep = ensure_report(c);
    std::string text = report_to_json(rep);
    if (!out_path.empty()) {
        write_text(out_path, text + "\n");
    }
    std::cout << "x0 (flow)   = " << real_to_decimal(rep.x0) << '\n';
    std::cout << "x0 (series) = " << real_to_decimal(rep.x0_alt) << '\n';
    std::cout << "|difference| = " << rep.x0_cross_diff.convert_to<double>() << '\n';
    std::cout << "a0_3 = " << rep.a0[0].convert_to<double>()
              << "  c'_1 = " << rep.cprime[1].convert_to<double>() << '\n';
    std::cout << "g'_{-2} = " << rep.gprime[0].convert_to<double>() << " (expect 1/48 = "
              << 1.0 / 48 << ")\n";
    if (out_path.empty()) {
        std::cout << text << '\n';
    }
    return 0;
}

int cmd_asympt(const RunConfig& c, int genus, int terms, const std::string& d_spec,
               const std::string& report_path, const std::string& out_path) {
    SingularityReport rep;
    if (!report_path.empty()) {
        std::ifstream in(report_path);
        if (!in) {
            throw std::runtime_error("cannot read " + report_path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        rep = report_from_json(buf.str());
    } else {
        rep = ensure_report(c);
    }
    PrecisionScope scope(rep.precision_bits);
    AsymptoticModel m = AsymptoticModel::from_report(rep, genus, terms);
    json j;
    j["genus"] = genus;
    j["n_terms"] = terms;
    j["x0"] = real_to_decimal(m.x0);
    json coeffs = json::array();
    for (const auto& a : m.coeffs) coeffs.push_back(real_to_decimal(a));
    j["coeffs"] = std::move(coeffs);
    json evals = json::array();
    std::istringstream ds(d_spec);
    std::string tok;
    while (std::getline(ds, tok, ',')) {
        long d = std::stol(tok);
        ScaledValue v = model_eval(m, d);
        evals.push_back({{"d", d},
                         {"log_e", v.log_e},
                         {"mantissa", real_to_decimal(v.mantissa)}});
    }
    j["evaluations"] = std::move(evals);
    std::string text = j.dump(2);
    if (out_path.empty()) {
        std::cout << text << '\n';
    } else {
        write_text(out_path, text + "\n");
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

int cmd_verify(const RunConfig& c, const std::string& suite, const std::string& out_path) {
    CheckList list;
    if (suite == "wdvv" || suite == "all") run_wdvv_suite(c, list);
    if (suite == "bounds" || suite == "all") run_bounds_suite(c, list);
    if (suite == "asymptotics" || suite == "all") run_asymptotics_suite(c, list);
    json j;
    j["suite"] = suite;
    j["pass"] = list.all_pass;
    j["checks"] = list.checks;
    if (!out_path.empty()) {
        write_text(out_path, j.dump(2) + "\n");
    }
    std::cout << (list.all_pass ? "all checks passed" : "some checks FAILED") << '\n';
    return list.all_pass ? 0 : 1;
}

int cmd_report(const RunConfig& c, const std::string& out_dir) {
    SingularityReport rep = ensure_report(c);
    InvariantTable g0 = ensure_with_scaled(c, 0, c.d_exact, c.d_float);
    InvariantTable g1 = ensure_with_scaled(c, 1, c.d_exact, c.d_float);
    PrecisionScope scope(c.precision_bits);

    CheckList list;
    run_wdvv_suite(c, list);
    run_bounds_suite(c, list);
    run_asymptotics_suite(c, list);

    json j;
    j["config"] = json::parse(run_config_to_json(c));
    j["singularity"] = json::parse(report_to_json(rep));
    j["checks"] = list.checks;
    j["pass"] = list.all_pass;
    write_text(out_dir + "/report.json", j.dump(2) + "\n");

    int stride = std::max(1, c.d_float / 500);
    AsymptoticModel m0 = AsymptoticModel::from_report(rep, 0, c.n_terms);
    AsymptoticModel m1 = AsymptoticModel::from_report(rep, 1, c.n_terms);
    write_text(out_dir + "/genus0.csv", validation_csv(g0, m0, 1, c.d_float, stride));
    write_text(out_dir + "/genus1.csv", validation_csv(g1, m1, 1, c.d_float, stride));
    std::cout << "wrote " << out_dir << "/report.json and plot data\n";
    return list.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enumerative invariants of the plane: exact tables, the generating-function "
                 "singularity, and asymptotic-expansion validation"};
    app.require_subcommand(1);

    std::string config_path;
    unsigned precision = 0;
    std::string cache_dir;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--precision-bits", precision, "working precision in bits");
    app.add_option("--cache-dir", cache_dir, "table cache directory");

    auto* inv = app.add_subcommand("invariants", "compute or extend the invariant tables");
    int genus = 0, dmax = 0;
    bool exact_flag = false, scaled_flag = false;
    std::string out_path;
    inv->add_option("--genus", genus, "0 or 1")->required()->check(CLI::Range(0, 1));
    inv->add_option("--dmax", dmax, "largest degree")->required()->check(CLI::PositiveNumber);
    inv->add_flag("--exact", exact_flag, "exact rational table");
    inv->add_flag("--scaled", scaled_flag, "scaled high-precision table");
    inv->add_option("--out", out_path, "write the records here instead of stdout");

    auto* sing = app.add_subcommand("singularity", "locate the singularity and expand there");
    std::string sing_out;
    sing->add_option("--out", sing_out, "report JSON path (default: cache)");

    auto* asym = app.add_subcommand("asympt", "evaluate the asymptotic models");
    int a_genus = 0, a_terms = 0;
    std::string a_d = "1000", a_report, a_out;
    asym->add_option("--genus", a_genus, "0 or 1")->required()->check(CLI::Range(0, 1));
    asym->add_option("--terms", a_terms, "expansion terms (default from config)");
    asym->add_option("--d", a_d, "comma-separated degrees to evaluate");
    asym->add_option("--report", a_report, "reuse a singularity report JSON");
    asym->add_option("--out", a_out, "output JSON path");

    auto* ver = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all", ver_out;
    ver->add_option("--suite", suite, "all|wdvv|bounds|asymptotics")
        ->check(CLI::IsMember({"all", "wdvv", "bounds", "asymptotics"}));
    ver->add_option("--out", ver_out, "summary JSON path");

    auto* rep = app.add_subcommand("report", "full validation report and plot data");
    std::string out_dir = "out";
    rep->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config = gwasym::load_run_config(config_path);
        if (precision != 0) config.precision_bits = precision;
        if (!cache_dir.empty()) config.cache_dir = cache_dir;
        config.validate();
        gwasym::set_working_precision(config.precision_bits);

        if (inv->parsed()) {
            if (exact_flag == scaled_flag) {
                std::cerr << "choose exactly one of --exact / --scaled\n";
                return 2;
            }
            if (exact_flag && dmax > config.d_exact) config.d_exact = dmax;
            if (scaled_flag && dmax > config.d_float) config.d_float = dmax;
            return cmd_invariants(config, genus, dmax, scaled_flag, out_path);
        }
        if (sing->parsed()) {
            std::string path = sing_out.empty() ? report_cache_path(config) : sing_out;
            return cmd_singularity(config, path);
        }
        if (asym->parsed()) {
            if (a_terms == 0) a_terms = config.n_terms;
            return cmd_asympt(config, a_genus, a_terms, a_d, a_report, a_out);
        }
        if (ver->parsed()) {
            return cmd_verify(config, suite, ver_out);
        }
        if (rep->parsed()) {
            return cmd_report(config, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
