#pragma once

#include <vector>

#include "qfock/kernel.hpp"
#include "qfock/tensor.hpp"

namespace qfock {

// Set partition of {0..n-1}; blocks ordered by minimal element, elements
// ascending within a block.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
  int n = 0;
};

enum class PartitionFilter { all, min_block_2, pairs };

// Restricted-growth-string enumeration in lexicographic order.
std::vector<SetPartition> enumerate_partitions(int n, PartitionFilter filter = PartitionFilter::all);

// Independent counting oracles.
long long bell_number(int n);
long long double_factorial_odd(int n);  // (n-1)!! pair-partition count for even n

// Partition with +1/-1 block marks; singletons are always +1.
struct MarkedPartition {
  SetPartition partition;
  std::vector<int> marks;  // per block
};

std::vector<MarkedPartition> enumerate_marked(int n);

// prod Q(t_{min B2}, t_{max B1}) over block pairs with
// min B1 < min B2 < max B1 < max B2.
cplx crossing_coeff(const QKernel& k, const SetPartition& v, std::span<const int> idx);

// Marked variant: (-1,-1) crossing pairs plus (+1,-1) pairs with
// min B2 < max B1 < max B2.
cplx marked_crossing_coeff(const QKernel& k, const MarkedPartition& v, std::span<const int> idx);

// tau(<f_1 x..x f_n, omega^n>) as the partition sum over all-blocks>=2
// partitions; equals the operator vacuum expectation.  The OpenMP variant
// evaluates partitions in parallel and reduces in enumeration order.
cplx moment_formula(const QKernel& k, double lambda, const std::vector<FockTensor>& fs);
cplx moment_formula_serial(const QKernel& k, double lambda, const std::vector<FockTensor>& fs);

// Measures on T^n by cell mass; moments[d-1] has degree d.
using MeasureTensors = std::vector<FockTensor>;

// Inverts m_n = sum_V Q(V;.) prod c_|B| cellwise, degree by degree.
MeasureTensors cumulants_from_moments(const QKernel& k, const MeasureTensors& moments);

// Forward map, used as the round-trip oracle.
MeasureTensors moments_from_cumulants(const QKernel& k, const MeasureTensors& cumulants);

// Max |C_k(f_{j_1},...,f_{j_k})| over non-constant index sequences of length
// 2..depth; the f's are contracted against the cumulant cell masses.
double independence_test(const MeasureTensors& cumulants, const std::vector<FockTensor>& fs,
                         int depth);

}  // namespace qfock
