#include "pld/groebner.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pld {

namespace {

using Mono = std::vector<int>;

// Block order: compare the elimination block (first `split` slots) by graded
// reverse lex, then the remaining slots by graded reverse lex.
struct BlockOrder {
  int split = 0;

  bool less(const Mono& a, const Mono& b) const {
    long da = 0, db = 0;
    for (int i = 0; i < split; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da < db;
    for (int i = split - 1; i >= 0; --i)
      if (a[i] != b[i]) return a[i] > b[i];
    const int m = static_cast<int>(a.size());
    da = db = 0;
    for (int i = split; i < m; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da < db;
    for (int i = m - 1; i >= split; --i)
      if (a[i] != b[i]) return a[i] > b[i];
    return false;
  }
};

// Terms sorted descending; the leading term is t.front().
struct GPoly {
  std::vector<std::pair<Mono, Rat>> t;
  bool zero() const { return t.empty(); }
  const Mono& lm() const { return t.front().first; }
  const Rat& lc() const { return t.front().second; }
};

bool mono_divides(const Mono& a, const Mono& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

bool mono_coprime(const Mono& a, const Mono& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

Mono mono_sub(const Mono& a, const Mono& b) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// f - c * x^s * g, both inputs sorted descending in ord.
GPoly axpy_sub(const GPoly& f, size_t fstart, const Rat& c, const Mono& s, const GPoly& g,
               const BlockOrder& ord) {
  GPoly r;
  r.t.reserve(f.t.size() - fstart + g.t.size());
  size_t i = fstart, j = 0;
  Mono shifted(s.size());
  auto shift = [&](const Mono& m) {
    for (size_t k = 0; k < s.size(); ++k) shifted[k] = m[k] + s[k];
  };
  while (i < f.t.size() || j < g.t.size()) {
    bool take_f;
    if (i >= f.t.size()) {
      take_f = false;
    } else if (j >= g.t.size()) {
      take_f = true;
    } else {
      shift(g.t[j].first);
      if (f.t[i].first == shifted) {
        Rat v = f.t[i].second - c * g.t[j].second;
        if (v != 0) r.t.emplace_back(f.t[i].first, std::move(v));
        ++i;
        ++j;
        continue;
      }
      take_f = ord.less(shifted, f.t[i].first);
    }
    if (take_f) {
      r.t.push_back(f.t[i]);
      ++i;
    } else {
      shift(g.t[j].first);
      r.t.emplace_back(shifted, -c * g.t[j].second);
      ++j;
    }
  }
  return r;
}

GPoly mul_mono(const GPoly& f, const Mono& s) {
  GPoly r = f;
  for (auto& [m, c] : r.t)
    for (size_t k = 0; k < s.size(); ++k) m[k] += s[k];
  return r;
}

// Integer coefficients, content one, positive leading coefficient.
void make_primitive(GPoly& f) {
  if (f.t.empty()) return;
  mpz_class num_g = 0, den_l = 1;
  for (const auto& [m, c] : f.t) {
    num_g = gcd(num_g, c.get_num());
    den_l = lcm(den_l, c.get_den());
  }
  Rat scale(den_l, num_g);
  scale.canonicalize();
  if (f.lc() * scale < 0) scale = -scale;
  for (auto& [m, c] : f.t) c *= scale;
}

struct Budget {
  const GroebnerBudget& cfg;
  long pairs_done = 0;
  bool exceeded = false;
};

// Full normal form against the live basis elements.
GPoly normal_form(GPoly f, const std::vector<GPoly>& basis, const std::vector<char>& live,
                  const BlockOrder& ord, Budget& budget) {
  GPoly rem;
  size_t head = 0;
  Mono q;
  while (head < f.t.size()) {
    bool reduced = false;
    const Mono& lead = f.t[head].first;
    for (size_t b = 0; b < basis.size(); ++b) {
      if (!live[b]) continue;
      if (!mono_divides(basis[b].lm(), lead)) continue;
      q = mono_sub(lead, basis[b].lm());
      Rat c = f.t[head].second / basis[b].lc();
      f = axpy_sub(f, head, c, q, basis[b], ord);
      head = 0;
      if (static_cast<long>(f.t.size() + rem.t.size()) > budget.cfg.max_terms) {
        budget.exceeded = true;
        return rem;
      }
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.t.push_back(std::move(f.t[head]));
      ++head;
    }
  }
  return rem;
}

struct SPair {
  int i, j;
  Mono lcm;
};

// Gebauer-Moeller update: install h as basis element `hid`, pruning the new
// and old pair sets by the product and chain criteria.
void update_pairs(std::vector<GPoly>& basis, std::vector<char>& live, std::vector<SPair>& pairs,
                  GPoly h) {
  const int hid = static_cast<int>(basis.size());
  const Mono hlm = h.lm();

  struct Cand {
    int g;
    Mono lcm;
    bool coprime;
  };
  std::vector<Cand> cand;
  for (int g = 0; g < hid; ++g) {
    if (!live[g]) continue;
    cand.push_back({g, mono_lcm(hlm, basis[g].lm()), mono_coprime(hlm, basis[g].lm())});
  }

  // Keep a candidate only if no other candidate's lcm divides it; among
  // equal lcms the first in index order survives.
  std::vector<char> keep(cand.size(), 1);
  for (size_t a = 0; a < cand.size(); ++a) {
    if (!keep[a]) continue;
    for (size_t b = 0; b < cand.size(); ++b) {
      if (a == b || !keep[b]) continue;
      if (cand[b].lcm == cand[a].lcm ? b < a : mono_divides(cand[b].lcm, cand[a].lcm)) {
        keep[a] = 0;
        break;
      }
    }
  }

  // Chain criterion on the old pairs.
  std::vector<SPair> kept_old;
  for (auto& pr : pairs) {
    bool drop = mono_divides(hlm, pr.lcm) &&
                mono_lcm(hlm, basis[pr.i].lm()) != pr.lcm &&
                mono_lcm(hlm, basis[pr.j].lm()) != pr.lcm;
    if (!drop) kept_old.push_back(std::move(pr));
  }
  pairs = std::move(kept_old);

  // Product criterion: coprime pairs reduce to zero and are never queued.
  for (size_t a = 0; a < cand.size(); ++a)
    if (keep[a] && !cand[a].coprime) pairs.push_back({cand[a].g, hid, std::move(cand[a].lcm)});

  // Old elements with leading terms divisible by lt(h) become redundant.
  for (int g = 0; g < hid; ++g)
    if (live[g] && mono_divides(hlm, basis[g].lm())) live[g] = 0;

  basis.push_back(std::move(h));
  live.push_back(1);
}

struct Conversion {
  std::vector<std::string> slot_names;  // unified order: elim block, then rest
  int split = 0;
};

GPoly to_gpoly(const MPoly& p, const Conversion& cv, const BlockOrder& ord) {
  if (p.is_laurent()) throw Error("groebner: Laurent input");
  std::map<std::string, int> slot;
  for (size_t i = 0; i < cv.slot_names.size(); ++i) slot[cv.slot_names[i]] = static_cast<int>(i);
  const auto& pv = p.vars();
  std::vector<int> align(pv.size());
  for (size_t i = 0; i < pv.size(); ++i) align[i] = slot.at(pv[i]);
  GPoly g;
  for (const auto& [e, c] : p.terms()) {
    Mono m(cv.slot_names.size(), 0);
    for (size_t i = 0; i < pv.size(); ++i) m[align[i]] = e[i];
    g.t.emplace_back(std::move(m), c);
  }
  std::sort(g.t.begin(), g.t.end(),
            [&](const auto& a, const auto& b) { return ord.less(b.first, a.first); });
  return g;
}

MPoly to_mpoly(const GPoly& g, const Conversion& cv) {
  std::vector<int> order(cv.slot_names.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return cv.slot_names[a] < cv.slot_names[b]; });
  std::vector<std::string> names;
  for (int idx : order) names.push_back(cv.slot_names[idx]);
  MPoly::Terms terms;
  for (const auto& [m, c] : g.t) {
    std::vector<int> e(order.size());
    for (size_t i = 0; i < order.size(); ++i) e[i] = m[order[i]];
    terms[std::move(e)] = c;
  }
  return MPoly::from_terms(std::move(names), std::move(terms));
}

struct GBRun {
  std::vector<GPoly> basis;
  std::vector<char> live;
  Conversion cv;
  BlockOrder ord;
  bool exceeded = false;
};

GBRun run_buchberger(const std::vector<MPoly>& generators,
                     const std::vector<std::string>& elim_vars, const GroebnerBudget& cfg) {
  GBRun run;
  Conversion& cv = run.cv;
  std::set<std::string> elim_set;
  for (const auto& v : elim_vars)
    if (elim_set.insert(v).second) cv.slot_names.push_back(v);
  cv.split = static_cast<int>(cv.slot_names.size());
  std::set<std::string> rest;
  for (const MPoly& p : generators)
    for (const auto& v : p.vars())
      if (!elim_set.count(v)) rest.insert(v);
  cv.slot_names.insert(cv.slot_names.end(), rest.begin(), rest.end());
  run.ord.split = cv.split;

  Budget budget{cfg};
  std::vector<SPair> pairs;
  for (const MPoly& p : generators) {
    if (p.is_zero()) continue;
    GPoly g = normal_form(to_gpoly(p, cv, run.ord), run.basis, run.live, run.ord, budget);
    if (budget.exceeded) break;
    if (g.zero()) continue;
    make_primitive(g);
    update_pairs(run.basis, run.live, pairs, std::move(g));
  }

  while (!pairs.empty() && !budget.exceeded) {
    if (++budget.pairs_done > cfg.max_pairs) {
      budget.exceeded = true;
      break;
    }
    // Normal selection: smallest lcm in the order; ties by generator indices.
    size_t pick = 0;
    for (size_t k = 1; k < pairs.size(); ++k) {
      if (run.ord.less(pairs[k].lcm, pairs[pick].lcm) ||
          (pairs[k].lcm == pairs[pick].lcm &&
           std::make_pair(pairs[k].i, pairs[k].j) < std::make_pair(pairs[pick].i, pairs[pick].j)))
        pick = k;
    }
    SPair pr = std::move(pairs[pick]);
    pairs.erase(pairs.begin() + static_cast<long>(pick));

    const GPoly& f = run.basis[pr.i];
    const GPoly& g = run.basis[pr.j];
    GPoly s = axpy_sub(mul_mono(f, mono_sub(pr.lcm, f.lm())), 0, f.lc() / g.lc(),
                       mono_sub(pr.lcm, g.lm()), g, run.ord);
    GPoly r = normal_form(std::move(s), run.basis, run.live, run.ord, budget);
    if (budget.exceeded) break;
    if (r.zero()) continue;
    make_primitive(r);
    if (static_cast<long>(run.basis.size()) + 1 > cfg.max_basis) {
      budget.exceeded = true;
      break;
    }
    update_pairs(run.basis, run.live, pairs, std::move(r));
  }

  run.exceeded = budget.exceeded;
  if (run.exceeded) return run;

  // Tail-reduce to the unique reduced basis (leading terms are already a
  // minimal generating set of the leading ideal).
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (size_t b = 0; b < run.basis.size(); ++b) {
      if (!run.live[b]) continue;
      std::vector<char> others = run.live;
      others[b] = 0;
      GPoly r = normal_form(run.basis[b], run.basis, others, run.ord, budget);
      if (budget.exceeded) {
        run.exceeded = true;
        return run;
      }
      make_primitive(r);
      if (!(r.t == run.basis[b].t)) changed = true;
      run.basis[b] = std::move(r);
    }
    if (!changed) break;
  }
  return run;
}

}  // namespace

std::vector<MPoly> groebner_basis(const std::vector<MPoly>& generators,
                                  const std::vector<std::string>& elim_vars,
                                  const GroebnerBudget& budget, bool* exceeded) {
  GBRun run = run_buchberger(generators, elim_vars, budget);
  if (exceeded) *exceeded = run.exceeded;
  std::vector<std::pair<Mono, MPoly>> out;
  for (size_t b = 0; b < run.basis.size(); ++b)
    if (run.live[b] && !run.basis[b].zero())
      out.emplace_back(run.basis[b].lm(), to_mpoly(run.basis[b], run.cv));
  std::sort(out.begin(), out.end(),
            [&](const auto& a, const auto& b) { return run.ord.less(a.first, b.first); });
  std::vector<MPoly> result;
  for (auto& [m, p] : out) result.push_back(std::move(p));
  return result;
}

EliminationResult groebner_eliminate(const std::vector<MPoly>& generators,
                                     const std::vector<std::string>& elim_vars,
                                     const GroebnerBudget& budget) {
  GBRun run = run_buchberger(generators, elim_vars, budget);
  EliminationResult res;
  if (run.exceeded) {
    res.status = ElimStatus::budget_exceeded;
    return res;
  }
  // With the block order, an element is free of the elimination variables
  // exactly when its leading term is.
  std::vector<std::pair<Mono, MPoly>> out;
  for (size_t b = 0; b < run.basis.size(); ++b) {
    if (!run.live[b] || run.basis[b].zero()) continue;
    const Mono& lm = run.basis[b].lm();
    bool free = true;
    for (int i = 0; i < run.cv.split; ++i) free = free && lm[i] == 0;
    if (free) out.emplace_back(lm, to_mpoly(run.basis[b], run.cv));
  }
  std::sort(out.begin(), out.end(),
            [&](const auto& a, const auto& b) { return run.ord.less(a.first, b.first); });
  for (auto& [m, p] : out) res.generators.push_back(std::move(p));
  res.status = res.generators.empty() ? ElimStatus::zero_ideal : ElimStatus::ok;
  return res;
}

MPoly ideal_codim1_part(const std::vector<MPoly>& generators) {
  MPoly g;
  for (const MPoly& p : generators) g = gcd_poly(g, p);
  if (g.is_zero() || g.is_constant()) return MPoly();
  return sqfree_part(g);
}

}  // namespace pld
