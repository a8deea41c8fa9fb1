#include "tenrank/simgen.hpp"

#include <cmath>

#include "tenrank/rng.hpp"

namespace tenrank {

std::string sim_model_name(SimModel m) {
    switch (m) {
        case SimModel::m0: return "M0";
        case SimModel::m1: return "M1";
        case SimModel::m2: return "M2";
        case SimModel::m3: return "M3";
        case SimModel::m4: return "M4";
        case SimModel::custom: return "custom";
    }
    return "?";
}

SimModel sim_model_from_name(const std::string& name) {
    if (name == "M0" || name == "m0") return SimModel::m0;
    if (name == "M1" || name == "m1") return SimModel::m1;
    if (name == "M2" || name == "m2") return SimModel::m2;
    if (name == "M3" || name == "m3") return SimModel::m3;
    if (name == "M4" || name == "m4") return SimModel::m4;
    if (name == "custom") return SimModel::custom;
    throw input_error("unknown simulation model '" + name + "'");
}

Eigen::MatrixXd make_phi(SimModel model) {
    switch (model) {
        case SimModel::m0: {
            Eigen::MatrixXd phi(2, 2);
            phi << 0.8, 0.3, 0.3, 0.8;
            return phi;
        }
        case SimModel::m1:
        case SimModel::m2:
        case SimModel::m3: {
            Eigen::MatrixXd phi(5, 5);
            phi << 0.8, 0.5, 0.5, 0.3, 0.3,  //
                0.5, 0.8, 0.5, 0.3, 0.3,     //
                0.3, 0.5, 0.8, 0.5, 0.3,     //
                0.3, 0.3, 0.5, 0.8, 0.5,     //
                0.3, 0.3, 0.5, 0.5, 0.8;
            return phi;
        }
        case SimModel::m4: {
            Eigen::MatrixXd phi = Eigen::MatrixXd::Constant(2, 2, 0.15);
            phi(0, 0) = 0.98;
            return phi;
        }
        case SimModel::custom:
            throw input_error("custom model requires an explicit phi matrix");
    }
    throw input_error("unknown model");
}

namespace {

std::vector<double> preset_strength(SimModel model, int r) {
    std::vector<double> s(static_cast<std::size_t>(r), 0.0);
    if (model == SimModel::m2) {
        for (int c = 2; c < r; ++c) s[static_cast<std::size_t>(c)] = 0.2;
    } else if (model == SimModel::m3) {
        std::fill(s.begin(), s.end(), 0.3);
    }
    return s;
}

}  // namespace

ModelSpec ModelSpec::preset(SimModel model, std::int64_t d1, std::int64_t d2, std::int64_t T,
                            std::uint64_t seed) {
    ModelSpec spec;
    spec.model = model;
    spec.d1 = d1;
    spec.d2 = d2;
    spec.T = T;
    const int r = (model == SimModel::m0 || model == SimModel::m4) ? 2 : 5;
    spec.r1 = spec.r2 = r;
    spec.phi = make_phi(model);
    spec.loading_strength = preset_strength(model, r);
    spec.seed = seed;
    return spec;
}

void ModelSpec::validate() const {
    if (d1 < 2 || d2 < 2 || T < 2) throw input_error("model spec needs d1, d2 >= 2 and T >= 2");
    if (r1 < 1 || r2 < 1 || r1 > d1 || r2 > d2)
        throw input_error("model spec needs 1 <= r_k <= d_k");
    if (phi.size() > 0 && (phi.rows() != r1 || phi.cols() != r2))
        throw input_error("phi must be r1 x r2");
    if (phi.size() > 0 && phi.cwiseAbs().maxCoeff() >= 1.0)
        throw input_error("AR(1) coefficients must satisfy |phi| < 1");
    if (!loading_strength.empty() &&
        static_cast<int>(loading_strength.size()) != std::max(r1, r2))
        throw input_error("loading_strength must have one exponent per factor column");
    if (noise_rho < 0.0 || noise_rho >= 1.0) throw input_error("noise_rho must lie in [0, 1)");
    if (noise_scale < 0.0) throw input_error("noise_scale must be >= 0");
}

std::vector<Eigen::MatrixXd> gen_factors(const Eigen::MatrixXd& phi, std::int64_t T,
                                         std::uint64_t seed) {
    if (phi.size() == 0) throw input_error("gen_factors needs a non-empty phi");
    if (phi.cwiseAbs().maxCoeff() >= 1.0) throw input_error("AR(1) coefficients must satisfy |phi| < 1");
    if (T < 1) throw input_error("gen_factors needs T >= 1");

    const auto r1 = phi.rows();
    const auto r2 = phi.cols();
    std::vector<Eigen::MatrixXd> f(static_cast<std::size_t>(T), Eigen::MatrixXd(r1, r2));

    // One path per entry, columns outer / rows inner; each path draws its
    // stationary start followed by T-1 innovations.
    NormalSampler rng(seed);
    for (Eigen::Index j = 0; j < r2; ++j)
        for (Eigen::Index i = 0; i < r1; ++i) {
            const double a = phi(i, j);
            double x = rng.normal() / std::sqrt(1.0 - a * a);
            f[0](i, j) = x;
            for (std::int64_t t = 1; t < T; ++t) {
                x = a * x + rng.normal();
                f[static_cast<std::size_t>(t)](i, j) = x;
            }
        }
    return f;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gen_loadings(std::int64_t d1, std::int64_t d2, int r1,
                                                         int r2,
                                                         const std::vector<double>& strength,
                                                         std::uint64_t seed) {
    if (r1 > d1 || r2 > d2) throw input_error("factor rank exceeds the mode dimension");
    NormalSampler rng(seed);
    auto fill = [&](std::int64_t d, int r) {
        Eigen::MatrixXd a(d, r);
        for (int c = 0; c < r; ++c) {
            const double expo = strength.empty() ? 0.0 : strength.at(static_cast<std::size_t>(c));
            const double scale = std::pow(static_cast<double>(d), -expo);
            for (std::int64_t i = 0; i < d; ++i) a(i, c) = scale * rng.normal();
        }
        return a;
    };
    Eigen::MatrixXd a1 = fill(d1, r1);
    Eigen::MatrixXd a2 = fill(d2, r2);
    return {std::move(a1), std::move(a2)};
}

std::vector<Eigen::MatrixXd> gen_noise(std::int64_t d1, std::int64_t d2, std::int64_t T, double rho,
                                       std::uint64_t seed) {
    if (rho < 0.0 || rho >= 1.0) throw input_error("noise rho must lie in [0, 1)");
    auto equicorr_sqrt = [&](std::int64_t d) {
        Eigen::MatrixXd psi = Eigen::MatrixXd::Constant(d, d, rho);
        psi.diagonal().setOnes();
        return symmetric_sqrt(psi);
    };
    const Eigen::MatrixXd s1 = equicorr_sqrt(d1);
    const Eigen::MatrixXd s2 = equicorr_sqrt(d2);

    NormalSampler rng(seed);
    std::vector<Eigen::MatrixXd> e;
    e.reserve(static_cast<std::size_t>(T));
    Eigen::MatrixXd z(d1, d2);
    for (std::int64_t t = 0; t < T; ++t) {
        for (Eigen::Index j = 0; j < d2; ++j)
            for (Eigen::Index i = 0; i < d1; ++i) z(i, j) = rng.normal();
        e.push_back(s1 * z * s2);
    }
    return e;
}

SimOutput generate(const ModelSpec& spec) {
    spec.validate();
    Eigen::MatrixXd phi = spec.phi.size() > 0 ? spec.phi : make_phi(spec.model);
    if (phi.rows() != spec.r1 || phi.cols() != spec.r2)
        throw input_error("phi shape does not match (r1, r2)");
    std::vector<double> strength = spec.loading_strength.empty() && spec.model != SimModel::custom
                                       ? preset_strength(spec.model, std::max(spec.r1, spec.r2))
                                       : spec.loading_strength;

    const std::uint64_t seed_loadings = derive_seed(spec.seed, 1);
    const std::uint64_t seed_factors = derive_seed(spec.seed, 2);
    const std::uint64_t seed_noise = derive_seed(spec.seed, 3);

    auto [a1, a2] = gen_loadings(spec.d1, spec.d2, spec.r1, spec.r2, strength, seed_loadings);
    std::vector<Eigen::MatrixXd> f = gen_factors(phi, spec.T, seed_factors);

    std::vector<Tensor> obs;
    obs.reserve(static_cast<std::size_t>(spec.T));
    const std::vector<std::int64_t> dims{spec.d1, spec.d2};
    if (spec.noise_scale > 0.0) {
        std::vector<Eigen::MatrixXd> e = gen_noise(spec.d1, spec.d2, spec.T, spec.noise_rho, seed_noise);
        for (std::int64_t t = 0; t < spec.T; ++t) {
            Eigen::MatrixXd x = a1 * f[static_cast<std::size_t>(t)] * a2.transpose() +
                                spec.noise_scale * e[static_cast<std::size_t>(t)];
            obs.emplace_back(dims, std::vector<double>(x.data(), x.data() + x.size()));
        }
    } else {
        for (std::int64_t t = 0; t < spec.T; ++t) {
            Eigen::MatrixXd x = a1 * f[static_cast<std::size_t>(t)] * a2.transpose();
            obs.emplace_back(dims, std::vector<double>(x.data(), x.data() + x.size()));
        }
    }

    SimOutput out{TensorSeries(std::move(obs)), spec.r1, spec.r2, std::move(a1), std::move(a2)};
    return out;
}

}  // namespace tenrank
