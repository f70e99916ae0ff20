#include "lampwalk/tail.hpp"

#include <algorithm>

#include "lampwalk/errors.hpp"
#include "lampwalk/group.hpp"

namespace lampwalk {

TailContext::TailContext(const Construction& cons) : cons_(&cons) {
  const std::size_t cap = cons.schedule.caps.set_cap;
  const std::size_t depth = static_cast<std::size_t>(cons.depth());
  levels_.reserve(depth);
  for (std::size_t n = 1; n <= depth; ++n) {
    const ConstructionLevel& lvl = cons.level(n);
    LevelTail lt;
    lt.level = n;
    try {
      const int w_pow = static_cast<int>(
          cons.schedule.w_exponent(static_cast<std::int64_t>(n)));
      const ElementSet q_full = set_pow(lvl.A, w_pow, cap);
      lt.Q = phi_set(q_full, cons.spec);
      lt.BF = phi_set(lvl.bF_inv, cons.spec);
      lt.BFQ = set_mul(lt.BF, lt.Q, cap);
      lt.feasible = true;
    } catch (const ResourceLimitError&) {
      lt.feasible = false;
    }
    levels_.push_back(std::move(lt));
  }
}

bool TailContext::feasible(std::size_t level) const {
  return level >= 1 && level <= levels_.size() && levels_[level - 1].feasible;
}

const LevelTail& TailContext::level(std::size_t n) const {
  if (n < 1 || n > levels_.size()) {
    throw ConfigError("tail level index out of range");
  }
  return levels_[n - 1];
}

std::optional<Decomposition> decompose_w(const TailContext& ctx,
                                         const GroupElement& w,
                                         std::size_t level) {
  const LevelTail& lt = ctx.level(level);
  if (!lt.feasible) {
    throw ResourceLimitError(
        "decomposition search space at level " + std::to_string(level) +
            " exceeds the cardinality cap",
        ctx.construction().schedule.caps.set_cap);
  }
  std::vector<GroupElement> q_inv;
  q_inv.reserve(lt.Q.size());
  for (const GroupElement& q : lt.Q) q_inv.push_back(inv(q));

  // Phase 1: the left factor. The remainder after stripping a candidate q1
  // is q1^-1 w; it must be one of the "core * trailing factor" products.
  // The lock makes the (left factor, remainder) pair unique, so a second
  // matching left factor is a genuine violation.
  std::optional<std::size_t> left_idx;
  for (std::size_t i = 0; i < lt.Q.size(); ++i) {
    if (!lt.BFQ.contains(mul(q_inv[i], w))) continue;
    if (left_idx) {
      throw VerificationError(
          "two left factors decompose one element at level " +
          std::to_string(level) + " — this falsifies the verified level lock");
    }
    left_idx = i;
  }
  if (!left_idx) return std::nullopt;

  // Phase 2: a canonical split of the remainder. Several (core, q2) splits
  // of one remainder are legitimate; take the smallest q2 in element order.
  const GroupElement left = mul(q_inv[*left_idx], w);
  for (std::size_t j = 0; j < lt.Q.size(); ++j) {
    const GroupElement core = mul(left, q_inv[j]);
    if (lt.BF.contains(core)) {
      return Decomposition{lt.Q[*left_idx], core, lt.Q[j]};
    }
  }
  throw VerificationError(
      "remainder set and marked-coset split disagree at level " +
      std::to_string(level));
}

std::optional<PMatch> p_map(const TailContext& ctx, const GroupElement& w) {
  std::optional<PMatch> found;
  for (std::size_t n = 1; n <= ctx.depth(); ++n) {
    if (!ctx.feasible(n)) continue;
    const std::optional<Decomposition> d = decompose_w(ctx, w, n);
    if (!d) continue;
    if (found) {
      throw VerificationError(
          "element decomposes at two levels (" +
          std::to_string(found->level) + " and " + std::to_string(n) +
          ") — this falsifies level disjointness");
    }
    found = PMatch{d->q1, n};
  }
  return found;
}

std::vector<GroupElement> t_chain(const TailContext& ctx,
                                  const GroupElement& w) {
  std::vector<GroupElement> chain;
  const std::optional<PMatch> top = p_map(ctx, w);
  if (!top) return chain;
  std::size_t prev_level = top->level;
  GroupElement q = top->q;
  for (;;) {
    const std::optional<PMatch> nxt = p_map(ctx, q);
    if (!nxt) break;  // q lies outside every decomposable set: not collected
    if (nxt->level >= prev_level) {
      throw VerificationError(
          "iterated left-factor levels fail to strictly decrease");
    }
    chain.push_back(q);
    prev_level = nxt->level;
    q = nxt->q;
  }
  return chain;
}

ElementSet w_set(const TailContext& ctx, std::size_t level) {
  const LevelTail& lt = ctx.level(level);
  if (!lt.feasible) {
    throw ResourceLimitError(
        "decomposition search space at level " + std::to_string(level) +
            " exceeds the cardinality cap",
        ctx.construction().schedule.caps.set_cap);
  }
  const std::size_t cap = ctx.construction().schedule.caps.set_cap;
  return set_mul(set_mul(lt.Q, lt.BF, cap), lt.Q, cap);
}

const TailEntry* TailValue::entry_at_level(u128 level) const {
  for (const TailEntry& e : entries) {
    if (e.level == level) return &e;
  }
  return nullptr;
}

namespace {

// Cross-check one resolved entry by decomposition search over all feasible
// levels: a match must sit exactly at the bookkeeping level.
Confidence cross_check_entry(const TailContext& ctx, const TailEntry& e) {
  if (e.level > u128{ctx.depth()}) return Confidence::bookkeeping_only;
  const std::size_t lvl = static_cast<std::size_t>(e.level);
  if (!ctx.feasible(lvl)) return Confidence::bookkeeping_only;
  const std::optional<PMatch> pm = p_map(ctx, e.value);
  if (!pm) return Confidence::bookkeeping_only;
  if (pm->level != lvl) {
    throw VerificationError(
        "bookkeeping placed a tail element at level " + std::to_string(lvl) +
        " but it decomposes at level " + std::to_string(pm->level));
  }
  return Confidence::cross_checked;
}

// Consistency of the horizon state's iterated-factor chain against the
// bookkeeping entries: where levels coincide values must agree, and chain
// elements may not appear at unclaimed levels at or above the lowest entry.
void check_chain_against_entries(const TailContext& ctx, const TailValue& tv,
                                 const GroupElement& horizon_state) {
  if (tv.entries.empty()) return;
  const u128 min_level = tv.entries.front().level;
  const std::optional<PMatch> top = p_map(ctx, horizon_state);
  if (!top) return;  // horizon state itself undecomposable (window truncation)
  std::size_t prev_level = top->level;
  GroupElement q = top->q;
  for (;;) {
    const std::optional<PMatch> nxt = p_map(ctx, q);
    if (!nxt) break;
    if (nxt->level >= prev_level) {
      throw VerificationError(
          "iterated left-factor levels fail to strictly decrease");
    }
    const TailEntry* ent = tv.entry_at_level(u128{nxt->level});
    if (ent != nullptr) {
      if (ent->resolved && !(ent->value == q)) {
        throw VerificationError(
            "iterated-factor chain disagrees with bookkeeping at level " +
            std::to_string(nxt->level));
      }
    } else if (u128{nxt->level} >= min_level) {
      throw VerificationError(
          "iterated-factor chain produced an element at level " +
          std::to_string(nxt->level) + " with no bookkeeping entry");
    }
    prev_level = nxt->level;
    q = nxt->q;
  }
}

}  // namespace

std::optional<TailValue> tau(const TailContext& ctx, const Trajectory& t,
                             std::size_t horizon) {
  const Construction& cons = ctx.construction();
  const StabilizationReport rep = check_stabilization(t, horizon);
  if (!rep.certified()) return std::nullopt;

  TailValue tv;
  tv.horizon = horizon;
  tv.i0 = *rep.i0;

  std::vector<u128> ks(horizon);
  std::vector<Color> ys(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    ks[i] = t.steps[i].k;
    ys[i] = t.steps[i].y;
  }
  std::vector<RecordEvent> recs;
  for (const RecordEvent& e : detect_records(ks, ys)) {
    if (e.time >= tv.i0) recs.push_back(e);
  }

  // Prefix walk states up to the first unresolved step.
  std::size_t first_unresolved = horizon + 1;
  std::vector<GroupElement> z(horizon + 1, identity(cons.spec.rank()));
  for (std::size_t i = 1; i <= horizon; ++i) {
    if (!t.steps[i - 1].resolved) {
      first_unresolved = i;
      break;
    }
    z[i] = mul(z[i - 1], t.steps[i - 1].x);
  }

  for (std::size_t j = 0; j + 1 < recs.size(); ++j) {
    const RecordEvent& r = recs[j];
    const RecordEvent& r_next = recs[j + 1];
    TailEntry e;
    e.level = r.value;
    const std::size_t needed = r_next.time - 1;
    if (needed < first_unresolved) {
      e.resolved = true;
      e.value = phi(z[needed], cons.spec);
      e.confidence = cross_check_entry(ctx, e);
    } else {
      e.resolved = false;
      ++tv.unresolved_count;
    }
    if (!tv.entries.empty() && !(tv.entries.back().level < e.level)) {
      throw VerificationError(
          "tail entry levels fail to strictly increase across record pairs");
    }
    tv.entries.push_back(std::move(e));
  }

  if (first_unresolved > horizon) {
    check_chain_against_entries(ctx, tv, phi(z[horizon], cons.spec));
  }
  return tv;
}

PerturbResult perturb_first(const Trajectory& t, const Step& replacement,
                            const Construction& cons, const KLaw& law) {
  if (t.steps.empty()) throw ConfigError("cannot perturb an empty trajectory");
  Step r = replacement;
  const u128 depth = static_cast<u128>(cons.depth());
  if (r.k >= 1 && r.k <= depth) r.resolved = true;
  if (!step_valid(r, cons)) {
    throw ConfigError(
        "replacement step has zero probability under the sampler at the "
        "built depth");
  }
  PerturbResult out;
  out.trajectory = t;
  out.trajectory.steps[0] = r;
  const Step& orig = t.steps[0];
  if (orig.resolved) {
    out.ratio = step_probability(r, cons, law) /
                step_probability(orig, cons, law);
  }
  return out;
}

}  // namespace lampwalk
