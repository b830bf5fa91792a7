// Brute-force dense linear algebra used to verify the engine from an
// independent code path: plain nested-vector matrices, Kronecker products and
// explicit projector arithmetic, with no shared bit-indexing helpers.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<std::vector<C>>;  // rectangular, row-major

inline Mat zeros(std::size_t rows, std::size_t cols) {
  return Mat(rows, std::vector<C>(cols, C(0)));
}

inline Mat identity(std::size_t d) {
  Mat m = zeros(d, d);
  for (std::size_t i = 0; i < d; ++i) m[i][i] = C(1);
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size();
  const std::size_t br = b.size(), bc = b[0].size();
  Mat m = zeros(ar * br, ac * bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l)
          m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), bc = b[0].size();
  if (b.size() != ac) throw std::invalid_argument("oracle mul shape");
  Mat m = zeros(ar, bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t k = 0; k < ac; ++k)
      for (std::size_t j = 0; j < bc; ++j) m[i][j] += a[i][k] * b[k][j];
  return m;
}

inline Vec apply(const Mat& a, const Vec& v) {
  if (v.size() != a[0].size()) throw std::invalid_argument("oracle apply shape");
  Vec out(a.size(), C(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline Mat dagger(const Mat& a) {
  Mat m = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) m[j][i] = std::conj(a[i][j]);
  return m;
}

inline Mat px() { return {{C(0), C(1)}, {C(1), C(0)}}; }
inline Mat py() { return {{C(0), C(0, -1)}, {C(0, 1), C(0)}}; }
inline Mat pz() { return {{C(1), C(0)}, {C(0), C(-1)}}; }
inline Mat hada() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{C(s), C(s)}, {C(s), C(-s)}};
}
inline Mat rzm(double a) {
  return {{std::polar(1.0, -a / 2), C(0)}, {C(0), std::polar(1.0, a / 2)}};
}
inline Mat rxm(double b) {
  const C c(std::cos(b / 2)), ms(0, -std::sin(b / 2));
  return {{c, ms}, {ms, c}};
}

// Gate `u` acting on 1-based position q of an n-qubit register (qubit 1 is
// the most significant index bit), built purely from Kronecker products.
inline Mat op_on(const Mat& u, int q, int n) {
  Mat m = {{C(1)}};
  for (int j = 1; j <= n; ++j) m = kron(m, j == q ? u : identity(2));
  return m;
}

// 1x2 bra of the equatorial state (|0> + (-1)^s e^{-i phi} |1>)/sqrt(2).
inline Mat equatorial_bra(double phi, int s) {
  const double r = 1.0 / std::sqrt(2.0);
  return {{C(r), (s == 0 ? 1.0 : -1.0) * std::polar(r, phi)}};
}

inline Mat computational_bra(int s) {
  return s == 0 ? Mat{{C(1), C(0)}} : Mat{{C(0), C(1)}};
}

// <bra| applied to qubit q of an n-qubit register: a (2^{n-1}) x 2^n map.
inline Mat bra_on(const Mat& bra, int q, int n) {
  Mat m = {{C(1)}};
  for (int j = 1; j <= n; ++j) m = kron(m, j == q ? bra : identity(2));
  return m;
}

inline double norm2(const Vec& v) {
  double s = 0;
  for (const C& c : v) s += std::norm(c);
  return s;
}

inline std::array<double, 3> bloch(const Vec& psi) {
  if (psi.size() != 2) throw std::invalid_argument("oracle bloch shape");
  const C r01 = psi[0] * std::conj(psi[1]);
  return {2 * r01.real(), -2 * r01.imag(),
          std::norm(psi[0]) - std::norm(psi[1])};
}

}  // namespace oracle
