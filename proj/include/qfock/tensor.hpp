#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfock/error.hpp"
#include "qfock/types.hpp"

namespace qfock {

// Dense complex tensor indexed by (i_1,...,i_n) over {0..m-1}^n.  Degree 0 is
// a single scalar.  The first slot is the most significant in the flat index.
class FockTensor {
 public:
  FockTensor() : sites_(1), degree_(0), data_(1, cplx(0.0)) {}
  FockTensor(int sites, int degree);

  static FockTensor scalar(int sites, cplx value);
  static FockTensor basis(int sites, int i);                 // e_i
  static FockTensor point_delta(int sites, int i, double weight);  // e_i / sigma_i
  static FockTensor from_values(int sites, std::vector<cplx> values);  // degree 1

  int sites() const { return sites_; }
  int degree() const { return degree_; }
  std::size_t size() const { return data_.size(); }

  cplx& operator[](std::size_t flat) { return data_[flat]; }
  const cplx& operator[](std::size_t flat) const { return data_[flat]; }

  cplx at(std::span<const int> idx) const { return data_[encode(idx)]; }
  cplx& at(std::span<const int> idx) { return data_[encode(idx)]; }

  std::size_t encode(std::span<const int> idx) const;
  void decode(std::size_t flat, std::span<int> idx) const;

  FockTensor& operator+=(const FockTensor& o);
  FockTensor& operator-=(const FockTensor& o);
  FockTensor& operator*=(cplx c);
  friend FockTensor operator+(FockTensor a, const FockTensor& b) { return a += b; }
  friend FockTensor operator-(FockTensor a, const FockTensor& b) { return a -= b; }
  friend FockTensor operator*(cplx c, FockTensor a) { return a *= c; }

  double max_abs() const;
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

 private:
  int sites_;
  int degree_;
  std::vector<cplx> data_;
};

// <f,g>_n = sum f(idx) conj(g(idx)) prod_k sigma_{idx_k}  (no n! factor)
cplx inner_product(const std::vector<double>& weights, const FockTensor& f,
                   const FockTensor& g);

double norm_squared(const std::vector<double>& weights, const FockTensor& f);

FockTensor tensor_product(const FockTensor& f, const FockTensor& g);

double max_abs_diff(const FockTensor& a, const FockTensor& b);

// Guard for dense-tensor cost: degree cap and total entry cap.
void check_tensor_envelope(int sites, int degree);

}  // namespace qfock
