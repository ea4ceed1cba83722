#include "qfock/tensor.hpp"

#include <cmath>

namespace qfock {

namespace {
constexpr int kMaxDegree = 8;
constexpr std::size_t kMaxEntries = std::size_t(1) << 24;

std::size_t pow_size(int m, int n) {
  std::size_t s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(m);
  return s;
}
}  // namespace

void check_tensor_envelope(int sites, int degree) {
  if (sites < 1) throw Error(errc::invalid_argument, "tensor needs at least one site");
  if (degree < 0 || degree > kMaxDegree)
    throw Error(errc::range_error, "tensor degree outside supported envelope (0..8)");
  std::size_t s = 1;
  for (int i = 0; i < degree; ++i) {
    s *= static_cast<std::size_t>(sites);
    if (s > kMaxEntries)
      throw Error(errc::envelope_exceeded, "dense tensor would exceed the entry budget");
  }
}

FockTensor::FockTensor(int sites, int degree) : sites_(sites), degree_(degree) {
  check_tensor_envelope(sites, degree);
  data_.assign(pow_size(sites, degree), cplx(0.0));
}

FockTensor FockTensor::scalar(int sites, cplx value) {
  FockTensor t(sites, 0);
  t.data_[0] = value;
  return t;
}

FockTensor FockTensor::basis(int sites, int i) {
  FockTensor t(sites, 1);
  t.data_[static_cast<std::size_t>(i)] = cplx(1.0);
  return t;
}

FockTensor FockTensor::point_delta(int sites, int i, double weight) {
  FockTensor t(sites, 1);
  t.data_[static_cast<std::size_t>(i)] = cplx(1.0 / weight);
  return t;
}

FockTensor FockTensor::from_values(int sites, std::vector<cplx> values) {
  if (values.size() != static_cast<std::size_t>(sites))
    throw Error(errc::invalid_argument, "degree-1 tensor needs one value per site");
  FockTensor t(sites, 1);
  t.data_ = std::move(values);
  return t;
}

std::size_t FockTensor::encode(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int v : idx) flat = flat * static_cast<std::size_t>(sites_) + static_cast<std::size_t>(v);
  return flat;
}

void FockTensor::decode(std::size_t flat, std::span<int> idx) const {
  for (int k = degree_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(sites_));
    flat /= static_cast<std::size_t>(sites_);
  }
}

FockTensor& FockTensor::operator+=(const FockTensor& o) {
  if (o.degree_ != degree_ || o.sites_ != sites_)
    throw Error(errc::invalid_argument, "tensor shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

FockTensor& FockTensor::operator-=(const FockTensor& o) {
  if (o.degree_ != degree_ || o.sites_ != sites_)
    throw Error(errc::invalid_argument, "tensor shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

FockTensor& FockTensor::operator*=(cplx c) {
  for (cplx& v : data_) v *= c;
  return *this;
}

double FockTensor::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

cplx inner_product(const std::vector<double>& weights, const FockTensor& f,
                   const FockTensor& g) {
  if (f.degree() != g.degree() || f.sites() != g.sites())
    throw Error(errc::invalid_argument, "inner product shape mismatch");
  const int n = f.degree();
  const int m = f.sites();
  if (n == 0) return f[0] * std::conj(g[0]);
  cplx tot(0.0);
  std::vector<int> idx(n, 0);
  const std::size_t sz = f.size();
  for (std::size_t flat = 0; flat < sz; ++flat) {
    f.decode(flat, idx);
    double w = 1.0;
    for (int k = 0; k < n; ++k) w *= weights[idx[k]];
    tot += f[flat] * std::conj(g[flat]) * w;
  }
  (void)m;
  return tot;
}

double norm_squared(const std::vector<double>& weights, const FockTensor& f) {
  return inner_product(weights, f, f).real();
}

FockTensor tensor_product(const FockTensor& f, const FockTensor& g) {
  if (f.sites() != g.sites())
    throw Error(errc::invalid_argument, "tensor product site mismatch");
  FockTensor out(f.sites(), f.degree() + g.degree());
  const std::size_t gs = g.size();
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (f[a] == cplx(0.0)) continue;
    for (std::size_t b = 0; b < gs; ++b) out[a * gs + b] = f[a] * g[b];
  }
  return out;
}

double max_abs_diff(const FockTensor& a, const FockTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace qfock
