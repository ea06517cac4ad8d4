#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/group.hpp"

namespace spectral {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXc = ComplexVector<double>;
using VectorXr = RealVector<double>;

/// Orders up to this size are transformed by direct summation.
inline constexpr std::uint32_t kDirectTransformLimit = std::uint32_t{1} << 14;

namespace detail {

/// exp(2 pi i k / n) for k in [0, n), evaluated in long double before rounding.
template <typename Scalar>
std::vector<std::complex<Scalar>> unit_roots(std::uint64_t n) {
  std::vector<std::complex<Scalar>> roots(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::uint64_t k = 0; k < n; ++k) {
    const long double theta = two_pi * static_cast<long double>(k) / static_cast<long double>(n);
    roots[k] = {static_cast<Scalar>(std::cos(theta)), static_cast<Scalar>(std::sin(theta))};
  }
  return roots;
}

/// In-place iterative radix-2 transform with kernel exp(sign * 2 pi i / n).
template <typename Scalar>
void radix2_fft(std::vector<std::complex<Scalar>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto roots = unit_roots<Scalar>(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<Scalar> w = roots[k * step];
        if (sign < 0) w = std::conj(w);
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

/// Chirp-z (Bluestein) transform: out[a] = sum_x in[x] exp(2 pi i a x / n), any n.
template <typename Scalar>
std::vector<std::complex<Scalar>> bluestein(const std::vector<std::complex<Scalar>>& in) {
  const std::uint64_t n = in.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  // chirp[k] = exp(pi i k^2 / n), with k^2 reduced mod 2n exactly.
  std::vector<std::complex<Scalar>> chirp(n);
  const long double pi = std::numbers::pi_v<long double>;
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t r = (k * k) % (2 * n);
    const long double theta = pi * static_cast<long double>(r) / static_cast<long double>(n);
    chirp[k] = {static_cast<Scalar>(std::cos(theta)), static_cast<Scalar>(std::sin(theta))};
  }
  std::vector<std::complex<Scalar>> a(m), b(m);
  for (std::uint64_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::uint64_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  radix2_fft(a, +1);
  radix2_fft(b, +1);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  radix2_fft(a, -1);
  std::vector<std::complex<Scalar>> out(n);
  const Scalar scale = Scalar(1) / static_cast<Scalar>(m);
  for (std::uint64_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

}  // namespace detail

/// f^(gamma) = sum_x f(x) gamma(x) by direct summation, O(N^2).
template <typename Derived>
ComplexVector<typename Derived::RealScalar> fourier_direct(const Group& g,
                                                          const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::RealScalar;
  const std::uint32_t n = g.order();
  if (static_cast<std::uint32_t>(f.size()) != n)
    throw Error(ErrorKind::GroupMismatch, "function length does not match group order");
  const std::uint32_t e = g.exponent();
  const auto roots = detail::unit_roots<Scalar>(e);
  ComplexVector<Scalar> out(n);
  if (g.is_cyclic()) {
    for (std::uint32_t a = 0; a < n; ++a) {
      std::complex<Scalar> acc(0);
      std::uint32_t k = 0;
      for (std::uint32_t x = 0; x < n; ++x) {
        acc += std::complex<Scalar>(f(x)) * roots[k];
        k += a;
        if (k >= e) k -= e;
      }
      out(a) = acc;
    }
    return out;
  }
  // Vector group: walk x as an odometer; a carry at digit j changes the
  // pairing by -(p-1) a_j = a_j (mod p), the same as an increment.
  const int dim = g.dim();
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(dim));
  for (std::uint32_t a = 0; a < n; ++a) {
    const auto ac = g.coords(a);
    std::fill(digits.begin(), digits.end(), 0);
    std::complex<Scalar> acc(0);
    std::uint32_t k = 0;
    for (std::uint32_t x = 0; x < n; ++x) {
      acc += std::complex<Scalar>(f(x)) * roots[k];
      for (int j = 0; j < dim; ++j) {
        k = (k + static_cast<std::uint32_t>(ac[static_cast<std::size_t>(j)])) % e;
        if (++digits[static_cast<std::size_t>(j)] < e) break;
        digits[static_cast<std::size_t>(j)] = 0;
      }
    }
    out(a) = acc;
  }
  return out;
}

/// Same transform through the fast path: chirp-z for prime cyclic groups,
/// one length-p transform per axis for F_p^n.
template <typename Derived>
ComplexVector<typename Derived::RealScalar> fourier_fast(const Group& g,
                                                        const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::RealScalar;
  const std::uint32_t n = g.order();
  if (static_cast<std::uint32_t>(f.size()) != n)
    throw Error(ErrorKind::GroupMismatch, "function length does not match group order");
  std::vector<std::complex<Scalar>> buf(n);
  for (std::uint32_t x = 0; x < n; ++x) buf[x] = std::complex<Scalar>(f(x));
  if (g.is_cyclic()) {
    buf = detail::bluestein(buf);
  } else {
    const std::uint32_t p = g.exponent();
    const auto roots = detail::unit_roots<Scalar>(p);
    std::vector<std::complex<Scalar>> line(p);
    std::uint32_t stride = 1;
    for (int axis = 0; axis < g.dim(); ++axis) {
      const std::uint32_t block = stride * p;
      for (std::uint32_t base = 0; base < n; base += block) {
        for (std::uint32_t offset = 0; offset < stride; ++offset) {
          for (std::uint32_t k = 0; k < p; ++k) {
            std::complex<Scalar> acc(0);
            for (std::uint32_t t = 0; t < p; ++t)
              acc += buf[base + offset + t * stride] * roots[(k * t) % p];
            line[k] = acc;
          }
          for (std::uint32_t k = 0; k < p; ++k) buf[base + offset + k * stride] = line[k];
        }
      }
      stride = block;
    }
  }
  ComplexVector<Scalar> out(n);
  for (std::uint32_t k = 0; k < n; ++k) out(k) = buf[k];
  return out;
}

template <typename Derived>
ComplexVector<typename Derived::RealScalar> fourier_transform(const Group& g,
                                                             const Eigen::MatrixBase<Derived>& f) {
  return g.order() <= kDirectTransformLimit ? fourier_direct(g, f) : fourier_fast(g, f);
}

/// f(x) = N^{-1} sum_gamma F(gamma) conj(gamma(x)).
template <typename Derived>
ComplexVector<typename Derived::RealScalar> inverse_fourier(const Group& g,
                                                           const Eigen::MatrixBase<Derived>& F) {
  using Scalar = typename Derived::RealScalar;
  const ComplexVector<Scalar> conj_in = F.conjugate();
  ComplexVector<Scalar> out = fourier_transform(g, conj_in).conjugate();
  return out / static_cast<Scalar>(g.order());
}

/// (f * h)(x) = sum_y f(y) h(x - y), evaluated on the Fourier side.
template <typename DerivedA, typename DerivedB>
ComplexVector<typename DerivedA::RealScalar> convolve(const Group& g, const Eigen::MatrixBase<DerivedA>& f,
                                                      const Eigen::MatrixBase<DerivedB>& h) {
  const auto fh = fourier_transform(g, f);
  const auto hh = fourier_transform(g, h);
  return inverse_fourier(g, fh.cwiseProduct(hh));
}

/// A complex-valued function on a group with cached counting-measure norms.
class DensityFn {
 public:
  DensityFn(Group group, VectorXc values);

  static DensityFn indicator(const Group& g, const ElementSet& set);
  static DensityFn real(const Group& g, const VectorXr& values);

  const Group& group() const noexcept { return group_; }
  const VectorXc& values() const noexcept { return values_; }
  std::complex<double> operator()(Element x) const { return values_(x); }

  double l1() const noexcept { return l1_; }
  double l2() const noexcept { return l2_; }
  double linf() const noexcept { return linf_; }
  /// ||f||_p for p >= 1.
  double lp(double p) const;

  ElementSet support() const;
  bool is_indicator() const;

  VectorXc transform() const { return fourier_transform(group_, values_); }

 private:
  Group group_;
  VectorXc values_;
  double l1_ = 0, l2_ = 0, linf_ = 0;
};

/// |<f, g> - N^{-1} sum_gamma f^(gamma) conj(g^(gamma))|.
double parseval_gap(const DensityFn& f, const DensityFn& g);

/// Indicator of a set as a dense real vector.
VectorXr indicator_vector(const Group& g, const ElementSet& s);

}  // namespace spectral
