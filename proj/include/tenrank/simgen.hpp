#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tenrank/tensor.hpp"

namespace tenrank {

/// Matrix factor model presets; M0/M4 have 2x2 factors, M1-M3 have 5x5.
enum class SimModel { m0, m1, m2, m3, m4, custom };

std::string sim_model_name(SimModel m);
SimModel sim_model_from_name(const std::string& name);

/// Design of one simulated matrix series X_t = A_1 F_t A_2' + E_t.
struct ModelSpec {
    SimModel model = SimModel::m1;
    std::int64_t d1 = 20, d2 = 20;
    std::int64_t T = 300;
    int r1 = 5, r2 = 5;
    /// AR(1) coefficient per factor entry; empty -> make_phi(model).
    Eigen::MatrixXd phi;
    /// Per-column strength exponents: column c of A_k is scaled by d_k^{-strength[c]}.
    /// Empty -> preset for the model (M2: 0,0,.2,.2,.2; M3: all .3; else all 0).
    std::vector<double> loading_strength;
    double noise_rho = 0.2;
    double noise_scale = 1.0;  // 0 gives the noiseless variant
    std::uint64_t seed = 0;

    static ModelSpec preset(SimModel model, std::int64_t d1, std::int64_t d2, std::int64_t T,
                            std::uint64_t seed);
    void validate() const;
};

struct SimOutput {
    TensorSeries series;
    int r1 = 0, r2 = 0;
    Eigen::MatrixXd loading1, loading2;  // kept for diagnostics
};

/// Preset AR(1) coefficient matrices.
Eigen::MatrixXd make_phi(SimModel model);

/// Independent AR(1) factor paths started at the stationary law N(0, 1/(1-phi^2)).
/// Returned as T tensors of dims (r1, r2).
std::vector<Eigen::MatrixXd> gen_factors(const Eigen::MatrixXd& phi, std::int64_t T,
                                         std::uint64_t seed);

/// Loading matrices with i.i.d. N(0,1) entries, columns scaled by d_k^{-strength[c]}.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gen_loadings(std::int64_t d1, std::int64_t d2, int r1,
                                                         int r2,
                                                         const std::vector<double>& strength,
                                                         std::uint64_t seed);

/// Kronecker-structured white noise E_t = Psi1^{1/2} Z_t Psi2^{1/2} with
/// equicorrelation(1, rho) row/column covariances.
std::vector<Eigen::MatrixXd> gen_noise(std::int64_t d1, std::int64_t d2, std::int64_t T, double rho,
                                       std::uint64_t seed);

/// Assemble a full replication from the spec (pure function of the spec).
SimOutput generate(const ModelSpec& spec);

}  // namespace tenrank
