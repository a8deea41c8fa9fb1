#include "tenrank/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tenrank {

std::string criterion_name(Criterion c) { return c == Criterion::ic ? "ic" : "er"; }

Criterion criterion_from_name(const std::string& name) {
    if (name == "ic") return Criterion::ic;
    if (name == "er") return Criterion::er;
    throw input_error("unknown criterion '" + name + "' (expected ic or er)");
}

void PenaltySpec::validate() const {
    if (variant < 1 || variant > 5) throw input_error("penalty variant must be in 1..5");
    if (criterion == Criterion::ic && (nu < 0.0 || nu >= 1.0))
        throw input_error("IC penalty exponent nu must lie in [0, 1)");
    if (c_mult <= 0.0) throw input_error("IC penalty multiplier c_mult must be positive");
    if (c0 <= 0.0) throw input_error("ER penalty constant c0 must be positive");
}

std::string PenaltySpec::label() const { return criterion_name(criterion) + std::to_string(variant); }

namespace {

struct PenaltySizes {
    double d;   // product of all dims
    double dk;  // mode-k dim
    double t;
};

PenaltySizes penalty_sizes(const std::vector<std::int64_t>& dims, std::int64_t T, int mode,
                           bool need_mode) {
    if (dims.empty()) throw input_error("penalty needs a non-empty dims vector");
    double d = 1.0;
    for (std::int64_t v : dims) d *= static_cast<double>(v);
    if (d < 2.0 || T < 2) throw input_error("penalty functions need d >= 2 and T >= 2");
    PenaltySizes s{d, 0.0, static_cast<double>(T)};
    if (need_mode) {
        if (mode < 0 || mode >= static_cast<int>(dims.size()))
            throw input_error("invalid mode index for penalty");
        s.dk = static_cast<double>(dims[static_cast<std::size_t>(mode)]);
    }
    return s;
}

double checked_log(double arg) {
    if (arg <= 1.0) throw input_error("degenerate sizes: penalty log argument <= 1");
    return std::log(arg);
}

}  // namespace

double penalty_ic(int variant, const std::vector<std::int64_t>& dims, std::int64_t T, int h0,
                  double nu, int mode, double c_mult) {
    if (variant < 1 || variant > 5) throw input_error("IC penalty variant must be in 1..5");
    if (h0 < 1) throw input_error("h0 must be >= 1");
    const PenaltySizes s = penalty_sizes(dims, T, mode, variant == 5);
    const double dpow = std::pow(s.d, 2.0 - 2.0 * nu);
    const double h = static_cast<double>(h0);
    double g = 0.0;
    switch (variant) {
        case 1: g = h * dpow / s.t * checked_log(s.d * s.t / (s.d + s.t)); break;
        case 2: g = h * dpow * (1.0 / s.t + 1.0 / s.d) * checked_log(s.d * s.t / (s.d + s.t)); break;
        case 3: g = h * dpow / s.t * checked_log(std::min(s.d, s.t)); break;
        case 4: g = h * dpow * (1.0 / s.t + 1.0 / s.d) * checked_log(std::min(s.d, s.t)); break;
        case 5: g = h * dpow * (1.0 / s.t + 1.0 / s.d) * checked_log(std::min(s.dk, s.t)); break;
    }
    return c_mult * g;
}

double penalty_er(int variant, const std::vector<std::int64_t>& dims, std::int64_t T, int h0,
                  int mode, double c0) {
    if (variant < 1 || variant > 5) throw input_error("ER penalty variant must be in 1..5");
    if (h0 < 1) throw input_error("h0 must be >= 1");
    const double h = static_cast<double>(h0);
    if (variant == 1) {
        if (c0 <= 0.0) throw input_error("ER penalty constant c0 must be positive");
        return c0 * h;
    }
    const PenaltySizes s = penalty_sizes(dims, T, mode, variant >= 3);
    const double t2 = s.t * s.t;
    switch (variant) {
        case 2: return h * s.d * s.d / t2;
        case 3: return h * s.d * s.d / (t2 * s.dk * s.dk);
        case 4: return h * s.d * s.d / (t2 * s.dk * s.dk) + h * s.dk * s.dk / t2;
        case 5: return h * s.d * s.d / (t2 * s.dk) + h * s.d * s.dk / t2;
    }
    return 0.0;  // unreachable
}

double penalty_value(const PenaltySpec& spec, const std::vector<std::int64_t>& dims,
                     std::int64_t T, int h0, int mode) {
    spec.validate();
    return spec.criterion == Criterion::ic
               ? penalty_ic(spec.variant, dims, T, h0, spec.nu, mode, spec.c_mult)
               : penalty_er(spec.variant, dims, T, h0, mode, spec.c0);
}

SelectionResult ic_select(const std::vector<double>& values, double g, int m_star) {
    if (values.empty()) throw input_error("ic_select needs a non-empty spectrum");
    if (g <= 0.0) throw input_error("ic_select needs a positive penalty");
    if (m_star < 1 || m_star >= static_cast<int>(values.size()))
        throw input_error("ic_select needs 0 < m_star < spectrum length");

    // Tail sums computed from the smallest eigenvalue up for stable ordering.
    std::vector<double> tail(values.size() + 1, 0.0);
    for (int j = static_cast<int>(values.size()) - 1; j >= 0; --j)
        tail[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j) + 1] + values[static_cast<std::size_t>(j)];

    SelectionResult out;
    out.penalty = g;
    out.objective.resize(static_cast<std::size_t>(m_star) + 1);
    for (int m = 0; m <= m_star; ++m)
        out.objective[static_cast<std::size_t>(m)] = tail[static_cast<std::size_t>(m)] + static_cast<double>(m) * g;
    out.rank = 0;
    for (int m = 1; m <= m_star; ++m)
        if (out.objective[static_cast<std::size_t>(m)] < out.objective[static_cast<std::size_t>(out.rank)])
            out.rank = m;
    return out;
}

SelectionResult er_select(const std::vector<double>& values, double h, int m_star) {
    if (values.empty()) throw input_error("er_select needs a non-empty spectrum");
    if (h <= 0.0) throw input_error("er_select needs a positive penalty");
    if (m_star < 1 || m_star >= static_cast<int>(values.size()))
        throw input_error("er_select needs 1 <= m_star < spectrum length");

    SelectionResult out;
    out.penalty = h;
    out.objective.resize(static_cast<std::size_t>(m_star));
    for (int m = 1; m <= m_star; ++m)
        out.objective[static_cast<std::size_t>(m - 1)] =
            (values[static_cast<std::size_t>(m)] + h) / (values[static_cast<std::size_t>(m - 1)] + h);
    out.rank = 1;
    for (int m = 2; m <= m_star; ++m)
        if (out.objective[static_cast<std::size_t>(m - 1)] < out.objective[static_cast<std::size_t>(out.rank - 1)])
            out.rank = m;
    return out;
}

SelectionResult select_rank(const EigenSpectrum& spec, const PenaltySpec& penalty,
                            const std::vector<std::int64_t>& dims, std::int64_t T, int h0,
                            int m_star) {
    const double p = penalty_value(penalty, dims, T, h0, spec.mode);
    return penalty.criterion == Criterion::ic ? ic_select(spec.values, p, m_star)
                                              : er_select(spec.values, p, m_star);
}

int default_m_star(std::int64_t dk, int cap) {
    const int half = static_cast<int>(dk / 2);
    return std::max(1, std::min(half, cap));
}

}  // namespace tenrank
