#include "gwasym/series_json.hpp"

#include <json.hpp>

namespace gwasym {

namespace {

nlohmann::json record(const std::string& var, int m, nlohmann::json coeffs, unsigned bits) {
    nlohmann::json j;
    j["var"] = var;
    j["min_half_exponent"] = m;
    j["coeffs"] = std::move(coeffs);
    j["precision_bits"] = bits;
    return j;
}

} // namespace

std::string series_to_json(const PuiseuxSeries<Rat>& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : s.g) coeffs.push_back(rat_to_string(c));
    return record(s.var, s.m, std::move(coeffs), 0).dump();
}

std::string series_to_json(const PuiseuxSeries<Real>& s, unsigned precision_bits) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : s.g) coeffs.push_back(real_to_decimal(c));
    return record(s.var, s.m, std::move(coeffs), precision_bits).dump();
}

std::string series_to_json(const TruncatedSeries<Rat>& s) {
    return series_to_json(puiseux_from_truncated(s, false));
}

std::string series_to_json(const TruncatedSeries<Real>& s, unsigned precision_bits) {
    return series_to_json(puiseux_from_truncated(s, false), precision_bits);
}

PuiseuxSeries<Rat> series_rat_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Rat> g;
    for (const auto& c : j.at("coeffs")) g.push_back(rat_from_string(c.get<std::string>()));
    int m = j.at("min_half_exponent").get<int>();
    return PuiseuxSeries<Rat>(j.at("var").get<std::string>(), m, std::move(g),
                              m + static_cast<int>(g.size()) - 1);
}

PuiseuxSeries<Real> series_real_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    unsigned bits = j.at("precision_bits").get<unsigned>();
    PrecisionScope scope(bits == 0 ? working_precision_bits() : bits);
    std::vector<Real> g;
    for (const auto& c : j.at("coeffs")) g.push_back(real_from_decimal(c.get<std::string>()));
    int m = j.at("min_half_exponent").get<int>();
    return PuiseuxSeries<Real>(j.at("var").get<std::string>(), m, std::move(g),
                               m + static_cast<int>(g.size()) - 1);
}

} // namespace gwasym
