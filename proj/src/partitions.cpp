#include "qfock/partitions.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qfock {

namespace {

SetPartition from_rgs(const std::vector<int>& rgs) {
  SetPartition p;
  p.n = static_cast<int>(rgs.size());
  int nb = 0;
  for (int a : rgs) nb = std::max(nb, a + 1);
  p.blocks.assign(nb, {});
  for (int i = 0; i < p.n; ++i) p.blocks[rgs[i]].push_back(i);
  return p;
}

bool keep(const SetPartition& p, PartitionFilter f) {
  switch (f) {
    case PartitionFilter::all:
      return true;
    case PartitionFilter::min_block_2:
      return std::all_of(p.blocks.begin(), p.blocks.end(),
                         [](const auto& b) { return b.size() >= 2; });
    case PartitionFilter::pairs:
      return std::all_of(p.blocks.begin(), p.blocks.end(),
                         [](const auto& b) { return b.size() == 2; });
  }
  return false;
}

}  // namespace

std::vector<SetPartition> enumerate_partitions(int n, PartitionFilter filter) {
  if (n < 1 || n > 8) throw Error(errc::range_error, "partition enumeration supports 1 <= n <= 8");
  std::vector<SetPartition> out;
  std::vector<int> rgs(n, 0);
  // restricted growth strings in lexicographic order
  while (true) {
    SetPartition p = from_rgs(rgs);
    if (keep(p, filter)) out.push_back(std::move(p));
    int i = n - 1;
    while (i > 0) {
      int mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[j]);
      if (rgs[i] < mx + 1) break;
      --i;
    }
    if (i == 0) break;
    ++rgs[i];
    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
  }
  return out;
}

long long bell_number(int n) {
  // Bell triangle
  std::vector<std::vector<long long>> tri{{1}};
  for (int r = 1; r <= n; ++r) {
    std::vector<long long> row{tri.back().back()};
    for (std::size_t i = 0; i < tri.back().size(); ++i) row.push_back(row.back() + tri.back()[i]);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

long long double_factorial_odd(int n) {
  if (n % 2 != 0) return 0;
  long long v = 1;
  for (int k = n - 1; k >= 1; k -= 2) v *= k;
  return v;
}

std::vector<MarkedPartition> enumerate_marked(int n) {
  if (n < 1 || n > 6) throw Error(errc::range_error, "marked enumeration supports 1 <= n <= 6");
  std::vector<MarkedPartition> out;
  for (const SetPartition& p : enumerate_partitions(n)) {
    std::vector<int> big;
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
      if (p.blocks[b].size() >= 2) big.push_back(static_cast<int>(b));
    const unsigned variants = 1u << big.size();
    for (unsigned mask = 0; mask < variants; ++mask) {
      MarkedPartition mp{p, std::vector<int>(p.blocks.size(), 1)};
      for (std::size_t t = 0; t < big.size(); ++t)
        if (mask & (1u << t)) mp.marks[big[t]] = -1;
      out.push_back(std::move(mp));
    }
  }
  return out;
}

cplx crossing_coeff(const QKernel& k, const SetPartition& v, std::span<const int> idx) {
  cplx c(1.0);
  const int nb = static_cast<int>(v.blocks.size());
  for (int b1 = 0; b1 < nb; ++b1)
    for (int b2 = 0; b2 < nb; ++b2) {
      if (b1 == b2) continue;
      const auto& B1 = v.blocks[b1];
      const auto& B2 = v.blocks[b2];
      if (B1.front() < B2.front() && B2.front() < B1.back() && B1.back() < B2.back())
        c *= k(idx[B2.front()], idx[B1.back()]);
    }
  return c;
}

cplx marked_crossing_coeff(const QKernel& k, const MarkedPartition& v, std::span<const int> idx) {
  cplx c(1.0);
  const auto& blocks = v.partition.blocks;
  const int nb = static_cast<int>(blocks.size());
  for (int b1 = 0; b1 < nb; ++b1)
    for (int b2 = 0; b2 < nb; ++b2) {
      if (b1 == b2) continue;
      const auto& B1 = blocks[b1];
      const auto& B2 = blocks[b2];
      if (v.marks[b1] == -1 && v.marks[b2] == -1) {
        if (B1.front() < B2.front() && B2.front() < B1.back() && B1.back() < B2.back())
          c *= k(idx[B2.front()], idx[B1.back()]);
      } else if (v.marks[b1] == +1 && v.marks[b2] == -1) {
        if (B2.front() < B1.back() && B1.back() < B2.back())
          c *= k(idx[B2.front()], idx[B1.back()]);
      }
    }
  return c;
}

namespace {

cplx moment_term(const QKernel& k, double lambda, const std::vector<FockTensor>& fs,
                 const SetPartition& p) {
  const int m = k.size();
  const int n = p.n;
  const int nb = static_cast<int>(p.blocks.size());
  double lam_pow = 1.0;
  for (const auto& B : p.blocks) {
    const int e = static_cast<int>(B.size()) - 2;
    for (int i = 0; i < e; ++i) lam_pow *= lambda;
  }
  if (lam_pow == 0.0) return cplx(0.0);

  cplx total(0.0);
  std::vector<int> assign(nb, 0), idx(n, 0);
  while (true) {
    cplx val(1.0);
    for (int b = 0; b < nb; ++b) {
      const int site = assign[b];
      val *= k.weight(site);
      for (int i : p.blocks[b]) {
        idx[i] = site;
        val *= fs[i][site];
      }
      if (val == cplx(0.0)) break;
    }
    if (val != cplx(0.0)) total += val * crossing_coeff(k, p, idx);
    int b = nb - 1;
    while (b >= 0 && assign[b] == m - 1) assign[b--] = 0;
    if (b < 0) break;
    ++assign[b];
  }
  return lam_pow * total;
}

cplx moment_formula_impl(const QKernel& k, double lambda, const std::vector<FockTensor>& fs,
                         bool parallel) {
  const int n = static_cast<int>(fs.size());
  if (n == 0) return cplx(1.0);
  if (n > 8) throw Error(errc::range_error, "moment formula supports n <= 8");
  for (const FockTensor& f : fs)
    if (f.degree() != 1) throw Error(errc::invalid_argument, "moment arguments must be degree 1");

  const auto parts = enumerate_partitions(n, PartitionFilter::min_block_2);
  std::vector<cplx> partial(parts.size(), cplx(0.0));
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(parts.size());
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < np; ++i)
      partial[static_cast<std::size_t>(i)] = moment_term(k, lambda, fs, parts[i]);
  } else
#endif
  {
    (void)parallel;
    for (std::ptrdiff_t i = 0; i < np; ++i)
      partial[static_cast<std::size_t>(i)] = moment_term(k, lambda, fs, parts[i]);
  }
  // reduce in enumeration order for bit-stable results
  cplx total(0.0);
  for (const cplx& v : partial) total += v;
  return total;
}

}  // namespace

cplx moment_formula(const QKernel& k, double lambda, const std::vector<FockTensor>& fs) {
  return moment_formula_impl(k, lambda, fs, true);
}

cplx moment_formula_serial(const QKernel& k, double lambda, const std::vector<FockTensor>& fs) {
  return moment_formula_impl(k, lambda, fs, false);
}

namespace {

// sum over partitions of m_or_c products: shared by both directions
cplx partition_sum(const QKernel& k, const MeasureTensors& parts_of, const SetPartition& p,
                   std::span<const int> idx, bool skip_full) {
  if (skip_full && p.blocks.size() == 1) return cplx(0.0);
  cplx val = crossing_coeff(k, p, idx);
  std::vector<int> sub;
  for (const auto& B : p.blocks) {
    sub.clear();
    for (int i : B) sub.push_back(idx[i]);
    val *= parts_of[B.size() - 1].at(sub);
  }
  return val;
}

}  // namespace

MeasureTensors cumulants_from_moments(const QKernel& k, const MeasureTensors& moments) {
  const int nmax = static_cast<int>(moments.size());
  if (nmax > 6) throw Error(errc::range_error, "cumulant recursion supports n <= 6");
  MeasureTensors cums;
  for (int d = 1; d <= nmax; ++d) {
    const FockTensor& md = moments[d - 1];
    if (md.degree() != d) throw Error(errc::invalid_argument, "moment tensor degree mismatch");
    FockTensor cd = md;
    if (d >= 2) {
      const auto parts = enumerate_partitions(d);
      std::vector<int> idx(d);
      for (std::size_t flat = 0; flat < cd.size(); ++flat) {
        cd.decode(flat, idx);
        cplx correction(0.0);
        for (const SetPartition& p : parts)
          correction += partition_sum(k, cums, p, idx, /*skip_full=*/true);
        cd[flat] -= correction;
      }
    }
    cums.push_back(std::move(cd));
  }
  return cums;
}

MeasureTensors moments_from_cumulants(const QKernel& k, const MeasureTensors& cumulants) {
  const int nmax = static_cast<int>(cumulants.size());
  if (nmax > 6) throw Error(errc::range_error, "cumulant recursion supports n <= 6");
  MeasureTensors moms;
  for (int d = 1; d <= nmax; ++d) {
    FockTensor md(cumulants[d - 1].sites(), d);
    const auto parts = enumerate_partitions(d);
    std::vector<int> idx(d);
    for (std::size_t flat = 0; flat < md.size(); ++flat) {
      md.decode(flat, idx);
      cplx total(0.0);
      for (const SetPartition& p : parts)
        total += partition_sum(k, cumulants, p, idx, /*skip_full=*/false);
      md[flat] = total;
    }
    moms.push_back(std::move(md));
  }
  return moms;
}

double independence_test(const MeasureTensors& cumulants, const std::vector<FockTensor>& fs,
                         int depth) {
  if (depth > 5 || depth > static_cast<int>(cumulants.size()))
    throw Error(errc::range_error, "independence test depth above available cumulants");
  const int nf = static_cast<int>(fs.size());
  double worst = 0.0;
  for (int len = 2; len <= depth; ++len) {
    const FockTensor& ck = cumulants[len - 1];
    std::vector<int> seq(len, 0), idx(len);
    while (true) {
      bool constant = true;
      for (int i = 1; i < len; ++i)
        if (seq[i] != seq[0]) constant = false;
      if (!constant) {
        cplx val(0.0);
        for (std::size_t flat = 0; flat < ck.size(); ++flat) {
          if (ck[flat] == cplx(0.0)) continue;
          ck.decode(flat, idx);
          cplx prod = ck[flat];
          for (int i = 0; i < len; ++i) prod *= fs[seq[i]][idx[i]];
          val += prod;
        }
        worst = std::max(worst, std::abs(val));
      }
      int i = len - 1;
      while (i >= 0 && seq[i] == nf - 1) seq[i--] = 0;
      if (i < 0) break;
      ++seq[i];
    }
  }
  return worst;
}

}  // namespace qfock
