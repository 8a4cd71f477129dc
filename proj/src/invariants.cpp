#include "gwasym/invariants.hpp"

#include "gwasym/series.hpp"

#include <cmath>
#include <stdexcept>

namespace gwasym {

namespace {

// Guard digits so scaled entries round to within ~1 ulp of the exact values
// after O(dmax) positive accumulations.
constexpr unsigned kScaledGuardBits = 64;

__int128 weight_numerator(long long d1, long long d2) {
    __int128 p = static_cast<__int128>(d1) * d2;
    long long d = d1 + d2;
    return p * (3 * p * (d + 2) - 2 * static_cast<__int128>(d) * d);
}

Real round_to_working(const Real& x) {
    Real r(0);
    r += x;  // fresh target carries the working precision
    mpfr_prec_round(r.backend().data(), working_precision_bits(), MPFR_RNDN);
    return r;
}

} // namespace

Real ScaledValue::value() const {
    return mantissa * exp(Real(log_e));
}

Real ScaledValue::log() const {
    if (is_zero()) {
        throw std::domain_error("log of zero table entry");
    }
    return Real(log_e) + boost::multiprecision::log(mantissa);
}

ScaledValue ScaledValue::from_value(const Real& v) {
    ScaledValue s;
    if (v == 0) {
        s.mantissa = Real(0);
        return s;
    }
    s.log_e = boost::multiprecision::log(v).convert_to<double>();
    s.mantissa = v * exp(Real(-s.log_e));
    return s;
}

const Rat& InvariantTable::exact_at(int d) const {
    if (d < 1 || d > dmax_exact()) {
        throw std::out_of_range("no exact table entry for degree " + std::to_string(d));
    }
    return exact[static_cast<size_t>(d)];
}

Real InvariantTable::value(int d) const {
    if (d >= 1 && d <= dmax_exact()) {
        return to_real(exact[static_cast<size_t>(d)]);
    }
    if (d >= 1 && d <= dmax_scaled()) {
        return scaled[static_cast<size_t>(d)].value();
    }
    throw std::out_of_range("no table entry for degree " + std::to_string(d));
}

Real InvariantTable::log_value(int d) const {
    if (d >= 1 && d <= dmax_exact()) {
        Rat q = exact[static_cast<size_t>(d)];
        if (q <= 0) {
            throw std::domain_error("log of nonpositive table entry");
        }
        return log(to_real(q));
    }
    if (d >= 1 && d <= dmax_scaled()) {
        return scaled[static_cast<size_t>(d)].log();
    }
    throw std::out_of_range("no table entry for degree " + std::to_string(d));
}

Rat kontsevich_weight(long long d1, long long d2) {
    if (d1 < 1 || d2 < 1) {
        throw std::invalid_argument("kontsevich_weight needs d1, d2 >= 1");
    }
    long long d = d1 + d2;
    Rat num(Int(d1) * d2 * (Int(3) * d1 * d2 * (d + 2) - Int(2) * d * d));
    Rat den(Int(2) * (3 * d - 3) * (3 * d - 2) * (3 * d - 1));
    return num / den;
}

InvariantTable genus0_table(int dmax) {
    if (dmax < 1) {
        throw std::invalid_argument("genus0_table needs dmax >= 1");
    }
    InvariantTable t;
    t.genus = 0;
    t.exact.assign(static_cast<size_t>(dmax) + 1, Rat(0));
    t.exact[1] = Rat(1, 2);
    for (long long d = 2; d <= dmax; ++d) {
        Rat acc = 0;
        for (long long j = 1; j < d; ++j) {
            acc += kontsevich_weight(j, d - j) * t.exact[j] * t.exact[d - j];
        }
        t.exact[d] = acc;
    }
    return t;
}

InvariantTable genus1_table(int dmax, const InvariantTable& g0) {
    if (dmax < 1) {
        throw std::invalid_argument("genus1_table needs dmax >= 1");
    }
    if (g0.genus != 0 || g0.dmax_exact() < dmax) {
        throw std::invalid_argument("genus1_table needs an exact genus-0 table through dmax");
    }
    InvariantTable t;
    t.genus = 1;
    t.exact.assign(static_cast<size_t>(dmax) + 1, Rat(0));
    // 27 d n_{1,d} = d(d-1)(d-2)/8 n_{0,d} + sum_j j(3j-2) n_{0,j} (d-j) n_{1,d-j}
    for (long long d = 2; d <= dmax; ++d) {
        Rat acc = Rat(Int(d) * (d - 1) * (d - 2), 8) * g0.exact[d];
        for (long long j = 1; j < d; ++j) {
            acc += Rat(Int(j) * (3 * j - 2) * (d - j)) * g0.exact[j] * t.exact[d - j];
        }
        t.exact[d] = acc / Rat(27 * d);
    }
    return t;
}

void extend_scaled(InvariantTable& table, int dmax_scaled, unsigned bits,
                   const InvariantTable* g0) {
    if (dmax_scaled < 1) {
        throw std::invalid_argument("extend_scaled needs dmax >= 1");
    }
    if (dmax_scaled > 2000000) {  // weight numerators stay inside 128 bits
        throw std::invalid_argument("extend_scaled: dmax too large");
    }
    if (table.genus == 1) {
        if (g0 == nullptr || g0->dmax_scaled() < dmax_scaled) {
            throw std::invalid_argument(
                "scaled genus-1 recursion needs a scaled genus-0 table through dmax");
        }
    }
    PrecisionScope scope(bits + kScaledGuardBits);
    std::vector<Real> n(static_cast<size_t>(dmax_scaled) + 1, Real(0));
    if (table.genus == 0) {
        n[1] = Real(1) / 2;
        for (long long d = 2; d <= dmax_scaled; ++d) {
            Real acc = 0;
            Real den = to_real(__int128(2) * (3 * d - 3) * (3 * d - 2) * (3 * d - 1));
            for (long long j = 1; j < d; ++j) {
                acc += to_real(weight_numerator(j, d - j)) * n[j] * n[d - j];
            }
            n[d] = acc / den;
        }
    } else {
        std::vector<Real> n0(static_cast<size_t>(dmax_scaled) + 1, Real(0));
        for (int d = 1; d <= dmax_scaled; ++d) n0[d] = g0->value(d);
        for (long long d = 2; d <= dmax_scaled; ++d) {
            Real acc = to_real(__int128(d) * (d - 1) * (d - 2)) / 8 * n0[d];
            for (long long j = 1; j < d; ++j) {
                acc += to_real(__int128(j) * (3 * j - 2) * (d - j)) * n0[j] * n[d - j];
            }
            n[d] = acc / to_real(__int128(27) * d);
        }
    }
    table.precision_bits = bits;
    table.scaled.assign(static_cast<size_t>(dmax_scaled) + 1, ScaledValue{});
    PrecisionScope store(bits);
    for (int d = 1; d <= dmax_scaled; ++d) {
        table.scaled[static_cast<size_t>(d)] = ScaledValue::from_value(round_to_working(n[d]));
    }
}

WdvvResidual verify_wdvv_series(const InvariantTable& g0, int order) {
    if (order < 1 || order > g0.dmax_exact()) {
        throw std::invalid_argument("verify_wdvv_series: order must lie within the exact table");
    }
    size_t len = static_cast<size_t>(order) + 1;
    std::vector<Rat> f0(len, Rat(0)), f1(len, Rat(0)), f2(len, Rat(0)), f3(len, Rat(0));
    for (long long d = 1; d <= order; ++d) {
        const Rat& nd = g0.exact[static_cast<size_t>(d)];
        f0[d] = nd;
        f1[d] = Rat(d) * nd;
        f2[d] = Rat(d) * d * nd;
        f3[d] = Rat(d) * d * d * nd;
    }
    TruncatedSeries<Rat> F0{"q", f0}, F1{"q", f1}, F2{"q", f2}, F3{"q", f3};
    TruncatedSeries<Rat> lead = Rat(2) * F1 - Rat(3) * F2;
    lead.c[0] += 27;
    TruncatedSeries<Rat> lhs = lead * F3;
    TruncatedSeries<Rat> rhs = Rat(6) * F0 - Rat(33) * F1 + Rat(54) * F2 + F2 * F2;
    TruncatedSeries<Rat> res = lhs - rhs;

    WdvvResidual out;
    out.coeffs.assign(len, Rat(0));
    for (int d = 1; d <= order; ++d) {
        out.coeffs[static_cast<size_t>(d)] = res[d];
        if (out.first_nonzero < 0 && res[d] != 0) {
            out.first_nonzero = d;
        }
    }
    return out;
}

std::vector<int> verify_bounds(const InvariantTable& g0) {
    std::vector<int> bad;
    // lower (1/27)^d d^{-7/2} and upper 3 (4/15)^d d^{-7/2}; d^{-7/2} is
    // compared through squared forms so everything stays rational
    for (int d = 1; d <= g0.dmax_exact(); ++d) {
        const Rat& n = g0.exact[static_cast<size_t>(d)];
        Rat sq = n * n * rat_pow(Rat(d), 7);
        Rat lo = sq * rat_pow(Rat(27), 2 * static_cast<unsigned long>(d));
        Rat hi = sq * rat_pow(Rat(15, 4), 2 * static_cast<unsigned long>(d));
        if (lo < 1 || hi > 9) {
            bad.push_back(d);
        }
    }
    if (!g0.scaled.empty()) {
        PrecisionScope scope(g0.precision_bits == 0 ? 64 : g0.precision_bits);
        Real ln27 = log(Real(27));
        Real ln415 = log(Real(4) / 15);
        Real ln3 = log(Real(3));
        Real slack = pow2(-static_cast<long>(g0.precision_bits / 2));
        for (int d = std::max(1, g0.dmax_exact() + 1); d <= g0.dmax_scaled(); ++d) {
            const ScaledValue& sv = g0.scaled[static_cast<size_t>(d)];
            if (sv.is_zero()) {
                bad.push_back(d);
                continue;
            }
            Real ln = sv.log();
            Real half7 = Real(7) / 2 * log(Real(d));
            Real lo = -Real(d) * ln27 - half7;
            Real hi = ln3 + Real(d) * ln415 - half7;
            if (ln < lo - slack || ln > hi + slack) {
                bad.push_back(d);
            }
        }
    }
    return bad;
}

ComparisonSpec comparison_f1(const Rat& seed) {
    return {[](int d) { return Rat(Int(d) * (3 * d - 2), 54); }, seed};
}

ComparisonSpec comparison_f2(const Rat& seed) {
    return {[](int d) { return Rat(Int(2) * d * d, 15); }, seed};
}

ComparisonSequence comparison_sequence(const ComparisonSpec& spec, int dmax) {
    if (dmax < 1) {
        throw std::invalid_argument("comparison_sequence needs dmax >= 1");
    }
    if (spec.seed <= 0) {
        throw std::invalid_argument("comparison_sequence seed must be positive");
    }
    std::vector<Rat> f(static_cast<size_t>(dmax) + 1, Rat(0));
    for (int d = 1; d <= dmax; ++d) {
        f[d] = spec.f(d);
        if (f[d] <= 0) {
            throw std::invalid_argument("comparison weight must be positive");
        }
    }
    ComparisonSequence out;
    out.n.assign(static_cast<size_t>(dmax) + 1, Rat(0));
    out.m.assign(static_cast<size_t>(dmax) + 1, Rat(0));
    out.n[1] = spec.seed;
    for (int d = 2; d <= dmax; ++d) {
        Rat acc = 0;
        for (int j = 1; j < d; ++j) {
            acc += f[j] * f[d - j] * out.n[j] * out.n[d - j];
        }
        out.n[d] = acc / f[d];
    }
    Rat m1 = f[1] * spec.seed;
    for (int d = 1; d <= dmax; ++d) {
        out.m[d] = f[d] * out.n[d];
        Rat closed = Rat(catalan_number(static_cast<unsigned>(d) - 1)) *
                     rat_pow(m1, static_cast<unsigned long>(d));
        if (out.m[d] != closed) {
            throw std::logic_error("comparison sequence disagrees with the Catalan closed form");
        }
    }
    return out;
}

Int catalan_number(unsigned k) {
    // binom(2k, k) by partial binomials (each intermediate is an integer),
    // then C_k = binom(2k, k)/(k+1)
    Int c = 1;
    for (unsigned i = 1; i <= k; ++i) {
        c *= k + i;
        c /= i;
    }
    return c / (k + 1);
}

} // namespace gwasym
