#include "nm/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <unordered_map>

namespace nm {

namespace {

using Context = std::vector<Formula>;  // sorted, unique

void context_insert(Context& ctx, Formula f) {
  auto it = std::lower_bound(ctx.begin(), ctx.end(), f);
  if (it == ctx.end() || *it != f) ctx.insert(it, f);
}

bool context_contains(const Context& ctx, Formula f) {
  return std::binary_search(ctx.begin(), ctx.end(), f);
}

void context_erase(Context& ctx, Formula f) {
  auto it = std::lower_bound(ctx.begin(), ctx.end(), f);
  if (it != ctx.end() && *it == f) ctx.erase(it);
}

struct SequentKey {
  std::vector<FormulaId> context;
  FormulaId goal;

  friend bool operator==(const SequentKey&, const SequentKey&) = default;
};

struct SequentKeyHash {
  std::size_t operator()(const SequentKey& k) const noexcept {
    std::size_t h = std::hash<FormulaId>{}(k.goal);
    for (FormulaId id : k.context) h = h * 1000003u ^ id;
    return h;
  }
};

class LjtProver {
 public:
  bool prove(Context ctx, Formula goal) {
    // Invertible right rule: strip the goal down to an atom.
    while (goal.is_imp()) {
      context_insert(ctx, goal.antecedent());
      goal = goal.consequent();
    }
    if (context_contains(ctx, goal)) return true;

    // Invertible left rule for atomic antecedents: with p in the context,
    // p -> b may be replaced by b.  Saturate before branching.
    bool changed = true;
    while (changed) {
      changed = false;
      for (Formula f : ctx) {
        if (f.is_imp() && f.antecedent().is_var() &&
            context_contains(ctx, f.antecedent())) {
          context_erase(ctx, f);
          context_insert(ctx, f.consequent());
          changed = true;
          break;
        }
      }
      if (context_contains(ctx, goal)) return true;
    }

    SequentKey key{{}, goal.id()};
    key.context.reserve(ctx.size());
    for (Formula f : ctx) key.context.push_back(f.id());
    auto memo = cache_.find(key);
    if (memo != cache_.end()) return memo->second;

    // Branch on a nested implication (a -> b) -> c in the context.
    bool proved = false;
    for (Formula f : ctx) {
      if (!f.is_imp() || !f.antecedent().is_imp()) continue;
      Formula ab = f.antecedent();
      Formula c = f.consequent();
      Context rest = ctx;
      context_erase(rest, f);

      Context left = rest;
      context_insert(left, Formula::imp(ab.consequent(), c));
      if (!prove(std::move(left), ab)) continue;

      Context right = rest;
      context_insert(right, c);
      if (prove(std::move(right), goal)) {
        proved = true;
        break;
      }
    }
    cache_.emplace(std::move(key), proved);
    return proved;
  }

 private:
  std::unordered_map<SequentKey, bool, SequentKeyHash> cache_;
};

}  // namespace

bool decide_ljt(Formula f) { return LjtProver().prove({}, f); }

bool decide_sequent(const Sequent& s) {
  Context ctx;
  for (Formula f : s.context) context_insert(ctx, f);
  return LjtProver().prove(std::move(ctx), s.goal);
}

bool KripkeModel::valid() const {
  if (num_worlds == 0 || num_worlds > 32) return false;
  if (ge_mask.size() != num_worlds) return false;
  const std::uint32_t all =
      num_worlds == 32 ? ~0u : ((1u << num_worlds) - 1);
  for (std::size_t w = 0; w < num_worlds; ++w) {
    if (ge_mask[w] & ~all) return false;
    if (!(ge_mask[w] & (1u << w))) return false;  // reflexive
    for (std::size_t v = 0; v < num_worlds; ++v) {
      if ((ge_mask[w] >> v) & 1u) {
        if ((ge_mask[v] & ~ge_mask[w]) != 0) return false;  // transitive
      }
    }
  }
  if (ge_mask[0] != all) return false;  // rooted at world 0
  for (const auto& [atom, mask] : valuation) {
    if (mask & ~all) return false;
    for (std::size_t w = 0; w < num_worlds; ++w) {
      if ((mask >> w) & 1u) {
        if ((ge_mask[w] & ~mask) != 0) return false;  // persistence
      }
    }
  }
  return true;
}

bool model_forces(const KripkeModel& m, std::size_t world, Formula f) {
  if (f.is_var()) {
    for (const auto& [atom, mask] : m.valuation) {
      if (atom == f.atom_name()) return (mask >> world) & 1u;
    }
    return false;
  }
  for (std::size_t v = 0; v < m.num_worlds; ++v) {
    if (!((m.ge_mask[world] >> v) & 1u)) continue;
    if (model_forces(m, v, f.antecedent()) &&
        !model_forces(m, v, f.consequent())) {
      return false;
    }
  }
  return true;
}

namespace {

// Strict partial orders on m labeled points, as bitmasks above[i] of the
// points strictly above i, deduplicated up to relabeling.  These become
// the non-root part of a rooted frame.
std::vector<std::vector<std::uint32_t>> enumerate_posets(std::size_t m) {
  std::vector<std::vector<std::uint32_t>> result;
  if (m == 0) {
    result.push_back({});
    return result;
  }
  std::vector<std::size_t> perm(m);
  std::set<std::vector<std::uint32_t>> seen;

  // Each unordered pair is either incomparable or ordered one way.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.push_back({i, j});
  }
  std::vector<std::uint32_t> above(m, 0);
  auto transitive = [&]() {
    for (std::size_t i = 0; i < m; ++i) {
      std::uint32_t closure = above[i];
      for (std::size_t j = 0; j < m; ++j) {
        if ((above[i] >> j) & 1u) closure |= above[j];
      }
      if (closure != above[i]) return false;
    }
    return true;
  };
  auto canonical = [&]() {
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    std::vector<std::uint32_t> best;
    do {
      std::vector<std::uint32_t> mapped(m, 0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if ((above[i] >> j) & 1u) mapped[perm[i]] |= 1u << perm[j];
        }
      }
      if (best.empty() || mapped < best) best = mapped;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  };

  std::vector<int> choice(pairs.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < m; ++i) above[i] = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (choice[p] == 1) above[pairs[p].first] |= 1u << pairs[p].second;
      if (choice[p] == 2) above[pairs[p].second] |= 1u << pairs[p].first;
    }
    if (transitive()) {
      auto canon = canonical();
      if (seen.insert(canon).second) result.push_back(canon);
    }
    std::size_t p = 0;
    while (p < pairs.size() && choice[p] == 2) choice[p++] = 0;
    if (p == pairs.size()) break;
    ++choice[p];
  }
  return result;
}

const std::vector<std::vector<std::uint32_t>>& posets_up_to(std::size_t m) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<std::vector<std::uint32_t>>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, enumerate_posets(m)).first;
  return it->second;
}

void collect_atoms(Formula f, std::vector<Formula>& out) {
  if (f.is_var()) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    return;
  }
  collect_atoms(f.antecedent(), out);
  collect_atoms(f.consequent(), out);
}

int index_of_atom(const std::vector<Formula>& atoms, Formula a) {
  return int(std::find(atoms.begin(), atoms.end(), a) - atoms.begin());
}

void collect_subformulas(Formula f, std::vector<Formula>& out) {
  if (std::find(out.begin(), out.end(), f) != out.end()) return;
  if (f.is_imp()) {
    collect_subformulas(f.antecedent(), out);
    collect_subformulas(f.consequent(), out);
  }
  out.push_back(f);  // postorder: subformulas precede their hosts
}

// Bitmask evaluation of every subformula over an n-world rooted frame.
// The frame is the root (world 0, bit 0) below the poset on worlds 1..n-1.
struct FrameEval {
  std::size_t n;
  std::vector<std::uint32_t> ge;  // per world, worlds above it (incl. self)

  explicit FrameEval(const std::vector<std::uint32_t>& above) {
    n = above.size() + 1;
    const std::uint32_t all = (1u << n) - 1;
    ge.assign(n, 0);
    ge[0] = all;
    for (std::size_t i = 0; i < above.size(); ++i) {
      ge[i + 1] = (above[i] << 1) | (1u << (i + 1));
    }
  }

  std::uint32_t eval_imp(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0;
    for (std::size_t w = 0; w < n; ++w) {
      if ((ge[w] & a & ~b) == 0) out |= 1u << w;
    }
    return out;
  }

  // All upward-closed world sets of the frame.
  std::vector<std::uint32_t> upsets() const {
    std::vector<std::uint32_t> result;
    const std::size_t m = n - 1;
    for (std::uint32_t sub = 0; sub < (1u << m); ++sub) {
      std::uint32_t mask = sub << 1;
      bool closed = true;
      for (std::size_t w = 1; w < n && closed; ++w) {
        if ((mask >> w) & 1u) closed = (ge[w] & ~mask) == 0;
      }
      if (closed) result.push_back(mask);
    }
    result.push_back((1u << n) - 1);  // extensions containing the root
    return result;
  }
};

}  // namespace

std::optional<KripkeModel> countermodel_search(Formula f,
                                               std::size_t max_worlds) {
  if (max_worlds < 1) throw std::invalid_argument("max_worlds < 1");
  max_worlds = std::min<std::size_t>(max_worlds, 16);

  std::vector<Formula> atoms;
  collect_atoms(f, atoms);
  std::vector<Formula> subs;
  collect_subformulas(f, subs);

  // Dense evaluation table over the subformulas (postorder, hosts last).
  std::vector<int> lhs(subs.size(), -1), rhs(subs.size(), -1);
  std::vector<int> atom_slot(subs.size(), -1);
  auto index_of = [&](Formula g) {
    return int(std::find(subs.begin(), subs.end(), g) - subs.begin());
  };
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].is_imp()) {
      lhs[i] = index_of(subs[i].antecedent());
      rhs[i] = index_of(subs[i].consequent());
    } else {
      atom_slot[i] = index_of_atom(atoms, subs[i]);
    }
  }
  const std::size_t root_index = subs.size() - 1;

  std::vector<std::uint32_t> val(subs.size(), 0);
  for (std::size_t n = 1; n <= max_worlds; ++n) {
    for (const auto& poset : posets_up_to(n - 1)) {
      FrameEval frame(poset);
      const auto upsets = frame.upsets();
      // Odometer over one up-set per atom.
      std::vector<std::size_t> pick(atoms.size(), 0);
      while (true) {
        for (std::size_t i = 0; i < subs.size(); ++i) {
          val[i] = lhs[i] >= 0 ? frame.eval_imp(val[lhs[i]], val[rhs[i]])
                               : upsets[pick[atom_slot[i]]];
        }
        if ((val[root_index] & 1u) == 0) {
          KripkeModel model;
          model.num_worlds = n;
          model.ge_mask = frame.ge;
          for (std::size_t i = 0; i < atoms.size(); ++i) {
            model.valuation.push_back(
                {atoms[i].atom_name(), upsets[pick[i]]});
          }
          if (model.valid() && !model_forces(model, 0, f)) return model;
          // A witness that fails re-verification would be a search bug;
          // keep scanning rather than report it.
        }
        std::size_t i = 0;
        while (i < atoms.size() && pick[i] + 1 == upsets.size()) pick[i++] = 0;
        if (i == atoms.size()) break;
        ++pick[i];
      }
    }
  }
  return std::nullopt;
}

Formula random_formula(std::uint64_t seed, std::size_t max_size,
                       const std::vector<std::string>& atoms) {
  if (max_size < 1) throw std::invalid_argument("max_size < 1");
  if (atoms.empty()) throw std::invalid_argument("no atoms");
  std::mt19937_64 rng(seed);
  std::vector<Formula> pool;
  for (const auto& a : atoms) pool.push_back(Formula::var(a));

  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  std::function<Formula(std::size_t)> gen = [&](std::size_t budget) -> Formula {
    if (budget < 3 || pick(100) < 30) return pool[pick(pool.size())];
    std::size_t left = 1 + pick(budget - 2);
    Formula a = gen(left);
    Formula b = gen(budget - 1 - left);
    return Formula::imp(a, b);
  };
  return gen(max_size);
}

std::string model_to_string(const KripkeModel& m) {
  std::string out =
      std::to_string(m.num_worlds) + " world(s); order:";
  for (std::size_t w = 0; w < m.num_worlds; ++w) {
    for (std::size_t v = 0; v < m.num_worlds; ++v) {
      if (w != v && ((m.ge_mask[w] >> v) & 1u)) {
        out += " w" + std::to_string(w) + "<=w" + std::to_string(v);
      }
    }
  }
  out += "; valuation:";
  for (const auto& [atom, mask] : m.valuation) {
    out += ' ' + atom + "@{";
    bool first = true;
    for (std::size_t w = 0; w < m.num_worlds; ++w) {
      if ((mask >> w) & 1u) {
        if (!first) out += ',';
        out += 'w' + std::to_string(w);
        first = false;
      }
    }
    out += '}';
  }
  return out;
}

}  // namespace nm
