#include "gwasym/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gwasym {

namespace {

// Polynomial part of the model in powers of d^{-1/2} (everything except the
// e^{-d x0} factor).
Real model_mantissa(const AsymptoticModel& m, long d) {
    Real rd(d);
    Real inv_sqrt = 1 / sqrt(rd);
    Real mant(0);
    if (m.genus == 0) {
        Real p = pow(rd, -3) * inv_sqrt;  // d^{-7/2}
        for (const auto& a : m.coeffs) {
            mant += a * p;
            p /= rd;
        }
    } else {
        mant = Real(1) / (48 * rd);
        Real p = inv_sqrt / rd;  // d^{-3/2}
        for (const auto& a : m.coeffs) {
            mant += a * p;
            p /= rd;
        }
    }
    return mant;
}

} // namespace

AsymptoticModel AsymptoticModel::genus0(const Real& x0, std::vector<Real> a0) {
    AsymptoticModel m;
    m.genus = 0;
    m.x0 = x0;
    m.coeffs = std::move(a0);
    return m;
}

AsymptoticModel AsymptoticModel::genus1(const Real& x0, std::vector<Real> a1) {
    AsymptoticModel m;
    m.genus = 1;
    m.x0 = x0;
    m.coeffs = std::move(a1);
    return m;
}

AsymptoticModel AsymptoticModel::from_report(const SingularityReport& r, int genus,
                                             int n_terms) {
    if (genus == 0) {
        if (n_terms < 4 || static_cast<size_t>(n_terms - 3) > r.a0.size()) {
            throw std::invalid_argument("report holds too few genus-0 coefficients");
        }
        return genus0(r.x0, std::vector<Real>(r.a0.begin(), r.a0.begin() + (n_terms - 3)));
    }
    if (n_terms < 0 || static_cast<size_t>(n_terms) > r.a1.size()) {
        throw std::invalid_argument("report holds too few genus-1 coefficients");
    }
    return genus1(r.x0, std::vector<Real>(r.a1.begin(), r.a1.begin() + n_terms));
}

ScaledValue model_eval(const AsymptoticModel& m, long d) {
    if (d < 1) {
        throw std::invalid_argument("model_eval needs d >= 1");
    }
    Real mant = model_mantissa(m, d);
    ScaledValue out;
    out.log_e = (-m.x0 * d).convert_to<double>();
    // value = mantissa * e^{log_e} must equal mant * e^{-d x0} exactly; fold
    // the double rounding of log_e back into the mantissa
    out.mantissa = mant * exp(-m.x0 * d - Real(out.log_e));
    return out;
}

OrderFit residual_order_fit(const InvariantTable& table, const AsymptoticModel& m, int d_lo,
                            int d_hi) {
    if (d_hi - d_lo + 1 < 8) {
        throw std::invalid_argument("fit window must hold at least 8 degrees");
    }
    if (d_lo < 1 || d_hi > table.dmax()) {
        throw std::invalid_argument("fit window outside the table");
    }
    int trim = (d_hi - d_lo + 1) / 10;
    int lo = d_lo + trim, hi = d_hi - trim;
    unsigned bits = table.precision_bits ? table.precision_bits : working_precision_bits();
    Real noise = pow2(-static_cast<long>(bits) + 40);
    std::vector<double> xs, ys;
    for (int d = lo; d <= hi; ++d) {
        if (table.genus == 1 && d <= 2) continue;
        Real rescaled = exp(table.log_value(d) + m.x0 * d);
        Real resid = abs(rescaled - model_mantissa(m, d));
        if (resid < noise * rescaled) {
            throw std::runtime_error(
                "residual at the numeric noise floor; raise precision or shrink the window");
        }
        xs.push_back(std::log(static_cast<double>(d)));
        ys.push_back(log(resid).convert_to<double>());
    }
    if (xs.size() < 4) {
        throw std::invalid_argument("fit window too small after trimming");
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = static_cast<int>(xs.size());
    return fit;
}

RootConvergence root_convergence(const InvariantTable& t0, const InvariantTable& t1,
                                 const Real& x0, int d_lo, int d_hi) {
    if (t0.genus != 0 || t1.genus != 1) {
        throw std::invalid_argument("root_convergence takes the genus-0 and genus-1 tables");
    }
    if (d_lo < 1 || d_hi > std::min(t0.dmax(), t1.dmax())) {
        throw std::invalid_argument("window outside the common table range");
    }
    RootConvergence out;
    double target = exp(-x0).convert_to<double>();
    for (int d = d_lo; d <= d_hi; ++d) {
        if (d <= 2) continue;  // genus-1 entries vanish there
        double r0 = exp(t0.log_value(d) / d).convert_to<double>();
        double r1 = exp(t1.log_value(d) / d).convert_to<double>();
        out.d.push_back(d);
        out.r0.push_back(r0);
        out.r1.push_back(r1);
        out.gap0.push_back(std::abs(r0 - target));
        out.gap1.push_back(std::abs(r1 - target));
        out.cross.push_back(std::abs(r0 - r1));
    }
    if (out.d.size() < 4) {
        out.degenerate = true;
        return out;
    }
    size_t half = out.d.size() / 2;
    bool ok = true;
    for (size_t i = half + 1; i < out.d.size(); ++i) {
        ok = ok && out.gap0[i] < out.gap0[i - 1] && out.gap1[i] < out.gap1[i - 1] &&
             out.cross[i] < out.cross[i - 1];
    }
    out.gaps_decreasing = ok;
    out.gap0_at_end = out.gap0.back();
    out.gap1_at_end = out.gap1.back();
    out.cross_at_end = out.cross.back();
    return out;
}

OrderFit fit_genus1_gap_decay(const InvariantTable& t1, const Real& x0, int d_lo, int d_hi) {
    if (t1.genus != 1) {
        throw std::invalid_argument("gap decay fit takes the genus-1 table");
    }
    if (d_hi - d_lo + 1 < 8 || d_lo < 1 || d_hi > t1.dmax()) {
        throw std::invalid_argument("bad gap-decay window");
    }
    std::vector<double> xs, ys;
    for (int d = std::max(3, d_lo); d <= d_hi; ++d) {
        Real gap = abs(48 * Real(d) * exp(t1.log_value(d) + x0 * d) - 1);
        xs.push_back(std::log(static_cast<double>(d)));
        ys.push_back(log(gap).convert_to<double>());
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = static_cast<int>(xs.size());
    return fit;
}

std::string validation_csv(const InvariantTable& table, const AsymptoticModel& m, int d_lo,
                           int d_hi, int stride) {
    if (stride < 1) {
        throw std::invalid_argument("stride must be >= 1");
    }
    std::ostringstream os;
    os << "genus,d,exact_rescaled,model_mantissa,residual\n";
    for (int d = d_lo; d <= d_hi; d += stride) {
        if (table.genus == 1 && d <= 2) continue;
        Real rescaled = exp(table.log_value(d) + m.x0 * d);
        Real mant = model_mantissa(m, d);
        Real resid = rescaled - mant;
        os << table.genus << ',' << d << ',' << rescaled.str(20, std::ios_base::scientific)
           << ',' << mant.str(20, std::ios_base::scientific) << ','
           << resid.str(8, std::ios_base::scientific) << '\n';
    }
    return os.str();
}

} // namespace gwasym
