#include "qfock/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qfock {

FieldConfig::FieldConfig(QKernel k, double lam, int N)
    : kernel(std::move(k)), lambda(lam), cutoff(N) {
  if (N < 2) throw Error(errc::cutoff_too_small, "field needs cutoff >= 2");
}

GradedOperator omega(const FieldConfig& cfg, const FockTensor& f) {
  GradedOperator op = create(cfg.kernel, f) + annihilate(cfg.kernel, f);
  if (cfg.lambda != 0.0) op = op + cplx(cfg.lambda) * neutral(cfg.kernel, f);
  return op;
}

GradedVector apply_word(const FieldConfig& cfg, const std::vector<FockTensor>& word) {
  GradedVector v = GradedVector::vacuum(cfg.kernel.size(), cfg.cutoff);
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = omega(cfg, *it)(v);
  return v;
}

cplx vacuum_state(const FieldConfig& cfg, const std::vector<FockTensor>& word) {
  if (static_cast<int>(word.size()) > cfg.cutoff)
    throw Error(errc::word_too_long, "word longer than the cutoff loses mass under truncation");
  return apply_word(cfg, word).comp(0)[0];
}

FockTensor wick_polynomial_vector(const FieldConfig& cfg, const FockTensor& f) {
  if (f.degree() > cfg.cutoff)
    throw Error(errc::cutoff_too_small, "wick vector degree above cutoff");
  return symmetrize(cfg.kernel, f);
}

namespace {

GradedOperator point_omega(const FieldConfig& cfg, int site) {
  return omega(cfg, FockTensor::point_delta(cfg.kernel.size(), site, cfg.kernel.weight(site)));
}

// :omega(t_1)...omega(t_n): v by the recurrence; delta(s,t) carries the
// 1/sigma_s density of the discrete point delta.
GradedVector wick_apply(const FieldConfig& cfg, std::span<const int> sites,
                        const GradedVector& v) {
  if (sites.empty()) return v;
  const int t1 = sites[0];
  std::span<const int> rest = sites.subspan(1);
  GradedVector out = point_omega(cfg, t1)(wick_apply(cfg, rest, v));
  const double dd = 1.0 / cfg.kernel.weight(t1);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] != t1) continue;
    if (cfg.lambda != 0.0) out -= cplx(cfg.lambda * dd) * wick_apply(cfg, rest, v);
    cplx prefix(1.0);
    for (std::size_t l = 0; l < i; ++l) prefix *= cfg.kernel(t1, rest[l]);
    std::vector<int> shorter(rest.begin(), rest.end());
    shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i));
    out -= dd * prefix * wick_apply(cfg, shorter, v);
  }
  return out;
}

}  // namespace

GradedOperator wick_recurrence_apply(const FieldConfig& cfg, const std::vector<int>& sites) {
  if (static_cast<int>(sites.size()) > cfg.cutoff)
    throw Error(errc::cutoff_too_small, "wick monomial longer than cutoff");
  return GradedOperator(
      [cfg, sites](const GradedVector& v) { return wick_apply(cfg, sites, v); });
}

namespace {

// letter: (is_annihilator, site)
using Word = std::vector<std::pair<int, int>>;

// Move creators left; each swap d_s d+_t -> Q(s,t) d+_t d_s, delta dropped.
std::map<Word, cplx> normal_order_letters(const QKernel& k, const Word& word) {
  std::map<Word, cplx> pending{{word, cplx(1.0)}};
  std::map<Word, cplx> done;
  while (!pending.empty()) {
    std::map<Word, cplx> next;
    for (const auto& [w, coeff] : pending) {
      std::size_t pos = w.size();
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i].first == 1 && w[i + 1].first == 0) {
          pos = i;
          break;
        }
      if (pos == w.size()) {
        done[w] += coeff;
      } else {
        Word swapped = w;
        std::swap(swapped[pos], swapped[pos + 1]);
        next[swapped] += coeff * k(w[pos].second, w[pos + 1].second);
      }
    }
    pending = std::move(next);
  }
  return done;
}

GradedVector apply_letters(const FieldConfig& cfg, const Word& word, const GradedVector& v) {
  GradedVector out = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    out = (it->first == 0) ? point_creator(cfg.kernel, it->second)(out)
                           : point_annihilator(cfg.kernel, it->second)(out);
  }
  return out;
}

}  // namespace

GradedOperator wick_ordered_product(const FieldConfig& cfg, const std::vector<int>& sites) {
  const int n = static_cast<int>(sites.size());
  // expand each omega(t) into d+, lambda d+ d, d and normal order the choices
  std::map<Word, cplx> terms;
  const int choices = (cfg.lambda != 0.0) ? 3 : 2;
  std::vector<int> choice(n, 0);
  while (true) {
    Word letters;
    cplx coeff(1.0);
    for (int i = 0; i < n; ++i) {
      switch (choice[i]) {
        case 0: letters.push_back({0, sites[i]}); break;
        case 1: letters.push_back({1, sites[i]}); break;
        default:
          letters.push_back({0, sites[i]});
          letters.push_back({1, sites[i]});
          coeff *= cfg.lambda;
      }
    }
    for (const auto& [w, qc] : normal_order_letters(cfg.kernel, letters)) terms[w] += coeff * qc;
    int k = n - 1;
    while (k >= 0 && choice[k] == choices - 1) choice[k--] = 0;
    if (k < 0) break;
    ++choice[k];
  }
  return GradedOperator([cfg, terms](const GradedVector& v) {
    GradedVector out(v.sites(), v.cutoff());
    for (const auto& [w, c] : terms) out += c * apply_letters(cfg, w, v);
    return out;
  });
}

GradedOperator normal_order_product(const FieldConfig& cfg, const std::vector<int>& sites) {
  if (cfg.lambda != 0.0)
    throw Error(errc::invalid_argument, "bipartition normal ordering is the lambda = 0 case");
  const int n = static_cast<int>(sites.size());
  std::vector<std::pair<Word, cplx>> terms;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    // positions in I (creators) are the set bits
    Word w;
    cplx coeff(1.0);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) w.push_back({0, sites[i]});
    for (int j = 0; j < n; ++j)
      if (!(mask & (1u << j))) w.push_back({1, sites[j]});
    for (int kpos = 0; kpos < n; ++kpos)
      for (int mpos = 0; mpos < kpos; ++mpos)
        if ((mask & (1u << kpos)) && !(mask & (1u << mpos)))
          coeff *= cfg.kernel(sites[mpos], sites[kpos]);
    terms.emplace_back(std::move(w), coeff);
  }
  return GradedOperator([cfg, terms](const GradedVector& v) {
    GradedVector out(v.sites(), v.cutoff());
    for (const auto& [w, c] : terms) out += c * apply_letters(cfg, w, v);
    return out;
  });
}

WickNormalReport wick_vs_normal_report(const FieldConfig& cfg) {
  WickNormalReport rep;
  rep.equality_expected =
      cfg.kernel.is_constant_one() || (cfg.lambda == 0.0 && cfg.kernel.is_real());
  const int m = cfg.kernel.size();
  const int max_probe = std::min(2, cfg.cutoff - 3);
  if (max_probe < 0) throw Error(errc::cutoff_too_small, "wick-vs-normal needs cutoff >= 3");

  std::vector<int> sites(3);
  for (sites[0] = 0; sites[0] < m; ++sites[0])
    for (sites[1] = 0; sites[1] < m; ++sites[1])
      for (sites[2] = 0; sites[2] < m; ++sites[2]) {
        GradedOperator wick = wick_recurrence_apply(cfg, sites);
        GradedOperator normal = wick_ordered_product(cfg, sites);
        for (int d = 0; d <= max_probe; ++d) {
          FockTensor base(m, d);
          for (std::size_t flat = 0; flat < base.size(); ++flat) {
            FockTensor probe(m, d);
            probe[flat] = cplx(1.0);
            GradedVector v(m, cfg.cutoff);
            v.comp(d) = (d >= 2) ? symmetrize(cfg.kernel, probe) : probe;
            rep.max_residual = std::max(rep.max_residual, graded_max_diff(wick(v), normal(v)));
          }
        }
      }
  rep.pass = rep.equality_expected ? rep.max_residual <= kIdentityTol
                                   : rep.max_residual > 1e-6;
  return rep;
}

GradedVector wick_term(const FieldConfig& cfg, const MarkedPartition& v,
                       const std::vector<FockTensor>& fs) {
  const int m = cfg.kernel.size();
  const int n = static_cast<int>(fs.size());
  const auto& blocks = v.partition.blocks;
  const int nb = static_cast<int>(blocks.size());

  std::vector<int> plus_blocks, minus_blocks;
  for (int b = 0; b < nb; ++b) (v.marks[b] == 1 ? plus_blocks : minus_blocks).push_back(b);

  // surviving field of a +1 block is its maximal position
  std::vector<std::pair<int, int>> survivors;  // (position, block)
  for (int b : plus_blocks) survivors.emplace_back(blocks[b].back(), b);
  std::sort(survivors.begin(), survivors.end());
  const int r = static_cast<int>(survivors.size());

  double lam_pow = 1.0;
  for (int b = 0; b < nb; ++b) {
    const int sz = static_cast<int>(blocks[b].size());
    const int e = (v.marks[b] == 1) ? sz - 1 : sz - 2;
    for (int i = 0; i < e; ++i) lam_pow *= cfg.lambda;
  }

  GradedVector out(m, cfg.cutoff);
  if (lam_pow == 0.0) return out;

  FockTensor g(m, r);
  std::vector<int> u(r, 0), idx(n, 0), vassign(minus_blocks.size(), 0);
  const std::size_t cells = g.size();
  for (std::size_t flat = 0; flat < cells; ++flat) {
    g.decode(flat, u);
    cplx dens(1.0);
    for (int s = 0; s < r; ++s)
      for (int i : blocks[survivors[s].second]) dens *= fs[i][u[s]];
    if (dens == cplx(0.0)) continue;
    if (!minus_blocks.empty()) {
      for (int s = 0; s < r; ++s)
        for (int i : blocks[survivors[s].second]) idx[i] = u[s];
      cplx ssum(0.0);
      std::fill(vassign.begin(), vassign.end(), 0);
      while (true) {
        cplx val(1.0);
        for (std::size_t b = 0; b < minus_blocks.size(); ++b) {
          const int site = vassign[b];
          val *= cfg.kernel.weight(site);
          for (int i : blocks[minus_blocks[b]]) {
            idx[i] = site;
            val *= fs[i][site];
          }
        }
        if (val != cplx(0.0)) ssum += val * marked_crossing_coeff(cfg.kernel, v, idx);
        int b = static_cast<int>(vassign.size()) - 1;
        while (b >= 0 && vassign[b] == m - 1) vassign[b--] = 0;
        if (b < 0) break;
        ++vassign[b];
      }
      dens *= ssum;
    }
    g[flat] = dens;
  }
  out.comp(r) = (r >= 2) ? symmetrize(cfg.kernel, g) : g;
  out.comp(r) *= lam_pow;
  return out;
}

WickRuleReport wick_rule_expand(const FieldConfig& cfg, const std::vector<FockTensor>& fs) {
  const int n = static_cast<int>(fs.size());
  if (n > 6) throw Error(errc::range_error, "wick rule supported for n <= 6");
  if (n > cfg.cutoff) throw Error(errc::cutoff_too_small, "word length above cutoff");
  WickRuleReport rep{GradedVector(cfg.kernel.size(), cfg.cutoff),
                     GradedVector(cfg.kernel.size(), cfg.cutoff), 0.0};
  for (const MarkedPartition& v : enumerate_marked(n)) rep.expansion += wick_term(cfg, v, fs);
  rep.direct = apply_word(cfg, fs);
  rep.residual = graded_max_diff(rep.expansion, rep.direct);
  return rep;
}

MeasureTensors field_moment_tensors(const FieldConfig& cfg, int n_max) {
  if (n_max > cfg.cutoff) throw Error(errc::cutoff_too_small, "moments need cutoff >= degree");
  const int m = cfg.kernel.size();
  MeasureTensors moments;
  for (int d = 1; d <= n_max; ++d) {
    FockTensor t(m, d);
    std::vector<int> idx(d);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      t.decode(flat, idx);
      std::vector<FockTensor> word;
      word.reserve(d);
      for (int i : idx) word.push_back(FockTensor::basis(m, i));
      t[flat] = vacuum_state(cfg, word);
    }
    moments.push_back(std::move(t));
  }
  return moments;
}

}  // namespace qfock
