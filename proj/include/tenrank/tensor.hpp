#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "tenrank/common.hpp"

namespace tenrank {

/// Dense real tensor of order K >= 1. Data is one contiguous array with the
/// first mode varying fastest: flat(i_1,...,i_K) = i_1 + d_1*(i_2 + d_2*(...)).
/// Mode indices are 0-based throughout the library.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<std::int64_t> dims);
    Tensor(std::vector<std::int64_t> dims, std::vector<double> data);

    int order() const { return static_cast<int>(dims_.size()); }
    const std::vector<std::int64_t>& dims() const { return dims_; }
    std::int64_t dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    double operator[](std::int64_t flat) const { return data_[static_cast<std::size_t>(flat)]; }
    double& operator[](std::int64_t flat) { return data_[static_cast<std::size_t>(flat)]; }

    /// Multi-index access; idx.size() must equal order().
    double at(std::span<const std::int64_t> idx) const { return data_[static_cast<std::size_t>(flat_index(idx))]; }
    double& at(std::span<const std::int64_t> idx) { return data_[static_cast<std::size_t>(flat_index(idx))]; }
    std::int64_t flat_index(std::span<const std::int64_t> idx) const;

    bool operator==(const Tensor& other) const = default;

  private:
    std::vector<std::int64_t> dims_;
    std::vector<double> data_;
};

/// T observations of a common-dimension tensor, indexed by time (0-based).
class TensorSeries {
  public:
    TensorSeries() = default;
    explicit TensorSeries(std::vector<Tensor> obs);

    std::int64_t length() const { return static_cast<std::int64_t>(obs_.size()); }
    const std::vector<std::int64_t>& dims() const { return dims_; }
    int order() const { return static_cast<int>(dims_.size()); }

    const Tensor& obs(std::int64_t t) const { return obs_[static_cast<std::size_t>(t)]; }
    const std::vector<Tensor>& all() const { return obs_; }

  private:
    std::vector<Tensor> obs_;
    std::vector<std::int64_t> dims_;
};

/// Mode-k unfolding: d_k x d_{-k} matrix. Column index enumerates the remaining
/// modes in ascending mode order, lowest-numbered remaining mode fastest.
Eigen::MatrixXd mode_unfold(const Tensor& x, int mode);

/// Inverse of mode_unfold for the given target dims; exact round trip.
Tensor mode_refold(const Eigen::MatrixXd& m, int mode, const std::vector<std::int64_t>& dims);

/// k-mode product x ×_k u: replaces mode-k fibers by u times them.
/// u has shape d_k' x d_k; the result has mode-k dimension d_k'.
Tensor mode_product(const Tensor& x, const Eigen::MatrixXd& u, int mode);

/// Tensor outer product: (a ⊗ b)[i,j] = a[i] * b[j], order K+N.
Tensor outer_product(const Tensor& a, const Tensor& b);

/// Symmetric PSD square root via full eigendecomposition. Eigenvalues below
/// -1e-10 * max(1, lambda_max) are a hard error; small negatives clamp to 0.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& s);

/// The sub-tensor made of the first new_dims[k] coordinates in every mode.
Tensor leading_block(const Tensor& x, const std::vector<std::int64_t>& new_dims);

/// First t_len observations, each restricted to its leading block.
TensorSeries leading_block(const TensorSeries& series, const std::vector<std::int64_t>& new_dims,
                           std::int64_t t_len);

}  // namespace tenrank
