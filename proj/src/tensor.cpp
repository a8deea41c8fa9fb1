#include "tenrank/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace tenrank {

namespace {

std::int64_t checked_size(const std::vector<std::int64_t>& dims) {
    if (dims.empty()) throw input_error("tensor order must be >= 1");
    if (dims.size() > 8) throw input_error("tensors of order > 8 are not supported");
    std::int64_t n = 1;
    for (std::int64_t d : dims) {
        if (d < 1) throw input_error("every tensor dimension must be >= 1");
        n *= d;
    }
    return n;
}

void check_mode(const Tensor& x, int mode) {
    if (mode < 0 || mode >= x.order())
        throw input_error("invalid mode index " + std::to_string(mode) + " for order-" +
                          std::to_string(x.order()) + " tensor");
}

// Product of dims strictly below / strictly above the given mode.
std::int64_t left_size(const std::vector<std::int64_t>& dims, int mode) {
    return std::accumulate(dims.begin(), dims.begin() + mode, std::int64_t{1}, std::multiplies<>());
}
std::int64_t right_size(const std::vector<std::int64_t>& dims, int mode) {
    return std::accumulate(dims.begin() + mode + 1, dims.end(), std::int64_t{1}, std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<std::int64_t> dims)
    : dims_(std::move(dims)), data_(static_cast<std::size_t>(checked_size(dims_)), 0.0) {}

Tensor::Tensor(std::vector<std::int64_t> dims, std::vector<double> data) : dims_(std::move(dims)) {
    const std::int64_t n = checked_size(dims_);
    if (static_cast<std::int64_t>(data.size()) != n)
        throw input_error("tensor data length does not match product of dims");
    data_ = std::move(data);
}

std::int64_t Tensor::flat_index(std::span<const std::int64_t> idx) const {
    std::int64_t flat = 0;
    std::int64_t stride = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        flat += idx[k] * stride;
        stride *= dims_[k];
    }
    return flat;
}

TensorSeries::TensorSeries(std::vector<Tensor> obs) : obs_(std::move(obs)) {
    if (obs_.size() < 2) throw input_error("a tensor series needs at least T = 2 observations");
    dims_ = obs_.front().dims();
    for (const Tensor& x : obs_)
        if (x.dims() != dims_) throw input_error("all observations in a series must share dims");
}

Eigen::MatrixXd mode_unfold(const Tensor& x, int mode) {
    check_mode(x, mode);
    const auto& dims = x.dims();
    const std::int64_t left = left_size(dims, mode);
    const std::int64_t dk = dims[static_cast<std::size_t>(mode)];
    const std::int64_t right = right_size(dims, mode);

    Eigen::MatrixXd m(dk, left * right);
    const double* src = x.data();
    // flat = l + left*(i + dk*r); column = l + left*r.
    for (std::int64_t r = 0; r < right; ++r)
        for (std::int64_t i = 0; i < dk; ++i) {
            const double* block = src + left * (i + dk * r);
            for (std::int64_t l = 0; l < left; ++l) m(i, l + left * r) = block[l];
        }
    return m;
}

Tensor mode_refold(const Eigen::MatrixXd& m, int mode, const std::vector<std::int64_t>& dims) {
    Tensor out(dims);
    check_mode(out, mode);
    const std::int64_t left = left_size(dims, mode);
    const std::int64_t dk = dims[static_cast<std::size_t>(mode)];
    const std::int64_t right = right_size(dims, mode);
    if (m.rows() != dk || m.cols() != left * right)
        throw input_error("matrix shape does not match mode/dims in mode_refold");

    double* dst = out.data();
    for (std::int64_t r = 0; r < right; ++r)
        for (std::int64_t i = 0; i < dk; ++i) {
            double* block = dst + left * (i + dk * r);
            for (std::int64_t l = 0; l < left; ++l) block[l] = m(i, l + left * r);
        }
    return out;
}

Tensor mode_product(const Tensor& x, const Eigen::MatrixXd& u, int mode) {
    check_mode(x, mode);
    const auto& dims = x.dims();
    const std::int64_t dk = dims[static_cast<std::size_t>(mode)];
    if (u.cols() != dk) throw input_error("mode_product: matrix column count must equal the mode dimension");

    std::vector<std::int64_t> out_dims = dims;
    out_dims[static_cast<std::size_t>(mode)] = u.rows();
    Tensor out(out_dims);

    const std::int64_t left = left_size(dims, mode);
    const std::int64_t right = right_size(dims, mode);
    // Each right-slab is a contiguous left x dk column-major block; contract in place.
    for (std::int64_t r = 0; r < right; ++r) {
        Eigen::Map<const Eigen::MatrixXd> slab(x.data() + left * dk * r, left, dk);
        Eigen::Map<Eigen::MatrixXd> dst(out.data() + left * u.rows() * r, left, u.rows());
        dst.noalias() = slab * u.transpose();
    }
    return out;
}

Tensor outer_product(const Tensor& a, const Tensor& b) {
    std::vector<std::int64_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    Tensor out(dims);
    // With first-mode-fastest layout the outer product is the flat outer product.
    Eigen::Map<Eigen::MatrixXd> m(out.data(), a.size(), b.size());
    Eigen::Map<const Eigen::VectorXd> va(a.data(), a.size());
    Eigen::Map<const Eigen::VectorXd> vb(b.data(), b.size());
    m.noalias() = va * vb.transpose();
    return out;
}

Tensor leading_block(const Tensor& x, const std::vector<std::int64_t>& new_dims) {
    if (new_dims.size() != x.dims().size())
        throw input_error("leading_block needs one size per mode");
    for (std::size_t k = 0; k < new_dims.size(); ++k)
        if (new_dims[k] < 1 || new_dims[k] > x.dims()[k])
            throw input_error("leading_block sizes must lie in [1, d_k]");

    Tensor out(new_dims);
    const int K = x.order();
    std::vector<std::int64_t> idx(static_cast<std::size_t>(K), 0);
    for (std::int64_t flat = 0; flat < out.size(); ++flat) {
        out[flat] = x.at(idx);
        for (int k = 0; k < K; ++k) {
            if (++idx[static_cast<std::size_t>(k)] < new_dims[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return out;
}

TensorSeries leading_block(const TensorSeries& series, const std::vector<std::int64_t>& new_dims,
                           std::int64_t t_len) {
    if (t_len < 2 || t_len > series.length())
        throw input_error("leading_block series length must lie in [2, T]");
    std::vector<Tensor> obs;
    obs.reserve(static_cast<std::size_t>(t_len));
    for (std::int64_t t = 0; t < t_len; ++t) obs.push_back(leading_block(series.obs(t), new_dims));
    return TensorSeries(std::move(obs));
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols()) throw input_error("symmetric_sqrt requires a square matrix");
    const double scale = s.cwiseAbs().maxCoeff();
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
        throw input_error("symmetric_sqrt requires a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success) throw numeric_error("symmetric eigendecomposition failed");

    Eigen::VectorXd lam = eig.eigenvalues();
    const double lmax = lam.maxCoeff();
    const double floor = -1e-10 * std::max(1.0, lmax);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < floor)
            throw numeric_error("symmetric_sqrt: eigenvalue " + std::to_string(lam(i)) +
                                " below PSD tolerance");
        lam(i) = std::max(lam(i), 0.0);
    }
    return eig.eigenvectors() * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace tenrank
