#include "lampwalk/construction.hpp"

#include <string>

#include "lampwalk/errors.hpp"

namespace lampwalk {

namespace {

// Embeds a factor-group element back into the ambient group through the
// canonical section (zero on the dropped leading coordinates).
GroupElement lift_from_factor(const GroupElement& g, const GroupSpec& spec) {
  if (spec.factor_is_identity()) return g;
  GroupElement out;
  out.base.assign(static_cast<std::size_t>(spec.rank()), 0);
  out.base.back() = g.base.back();
  out.lamps = g.lamps;
  return out;
}

ElementSet with_c(const ElementSet& A, const GroupElement& c) {
  ElementSet extra = ElementSet::from_unsorted({c, inv(c)});
  return set_union(A, extra);
}

ElementSet make_D(const ElementSet& A, const ElementSet& F,
                  const ElementSet& F_inv, const GroupElement& c) {
  ElementSet D = set_union(F_inv, F);
  D = set_union(D, A);
  D = set_union(D, ElementSet::from_unsorted({c, inv(c)}));
  return D;
}

std::string level_prefix(std::int64_t i) {
  return "level " + std::to_string(i);
}

}  // namespace

const ConstructionLevel& Construction::level(std::int64_t i) const {
  if (i < 1 || i > depth()) {
    throw ConfigError("level index out of range: " + std::to_string(i));
  }
  return levels[static_cast<std::size_t>(i - 1)];
}

ConstructionLevel& Construction::level(std::int64_t i) {
  if (i < 1 || i > depth()) {
    throw ConfigError("level index out of range: " + std::to_string(i));
  }
  return levels[static_cast<std::size_t>(i - 1)];
}

void derive_level_sets(ConstructionLevel& lvl) {
  lvl.F_inv = set_inv(lvl.F);
  lvl.bF_inv = left_mul(lvl.b, lvl.F_inv);
}

Construction build_levels(const GroupSpec& spec, const GrowthSchedule& schedule,
                          std::int64_t L) {
  spec.validate();
  schedule.validate();
  if (L < 1) throw ConfigError("construction depth must be >= 1");
  const ResourceCaps& caps = schedule.caps;
  const GroupSpec factor = spec.factor();

  Construction c;
  c.spec = spec;
  c.schedule = schedule;
  const std::vector<GroupElement> cs =
      enumerate_elements(spec, static_cast<std::size_t>(L));

  ElementSet A = ElementSet::singleton(identity(spec.rank()));
  for (std::int64_t i = 1; i <= L; ++i) {
    try {
      ConstructionLevel lvl;
      lvl.index = i;
      lvl.A = A;
      lvl.c = cs[static_cast<std::size_t>(i - 1)];

      const ElementSet extended = with_c(A, lvl.c);
      const ElementSet target = set_pow(
          extended, static_cast<int>(schedule.folner_exponent(i)),
          caps.set_cap);
      lvl.F = find_folner(target, schedule.delta(i), spec, caps);
      lvl.F_inv = set_inv(lvl.F);
      lvl.D = make_D(A, lvl.F, lvl.F_inv, lvl.c);

      const ElementSet lock_target = phi_set(
          set_pow(lvl.D, static_cast<int>(schedule.lock_exponent(i)),
                  caps.set_cap),
          spec);
      const GroupElement b_factor = find_lock(lock_target, factor, caps);
      lvl.b = lift_from_factor(b_factor, spec);
      lvl.bF_inv = left_mul(lvl.b, lvl.F_inv);

      A = set_union(set_union(lvl.D, lvl.bF_inv),
                    right_mul(lvl.F, inv(lvl.b)));
      c.levels.push_back(std::move(lvl));
    } catch (const ResourceLimitError& e) {
      throw ResourceLimitError::wrapped(level_prefix(i), e);
    } catch (const SearchHorizonError& e) {
      throw SearchHorizonError(level_prefix(i) + ": " + e.what());
    }
  }
  return c;
}

void verify_construction(const Construction& c) {
  c.spec.validate();
  c.schedule.validate();
  if (c.levels.empty()) {
    throw VerificationError("construction holds no levels");
  }
  const ResourceCaps& caps = c.schedule.caps;
  const std::int64_t L = c.depth();
  const std::vector<GroupElement> cs =
      enumerate_elements(c.spec, static_cast<std::size_t>(L));

  ElementSet expected_A = ElementSet::singleton(identity(c.spec.rank()));
  for (std::int64_t i = 1; i <= L; ++i) {
    const ConstructionLevel& lvl = c.level(i);
    const std::string at = level_prefix(i);
    if (lvl.index != i) {
      throw VerificationError(at + ": stored index mismatch");
    }
    if (!(lvl.A == expected_A)) {
      throw VerificationError(at + ": A does not match the recursion");
    }
    if (!(lvl.c == cs[static_cast<std::size_t>(i - 1)])) {
      throw VerificationError(at + ": c is not the i-th enumerated element");
    }
    if (!(lvl.F_inv == set_inv(lvl.F)) ||
        !(lvl.bF_inv == left_mul(lvl.b, lvl.F_inv))) {
      throw VerificationError(at + ": derived sets are inconsistent");
    }
    if (!(lvl.D == make_D(lvl.A, lvl.F, lvl.F_inv, lvl.c))) {
      throw VerificationError(at + ": D does not match its definition");
    }

    const ElementSet target = set_pow(
        with_c(lvl.A, lvl.c),
        static_cast<int>(c.schedule.folner_exponent(i)), caps.set_cap);
    const FolnerReport folner =
        verify_folner(lvl.F, target, c.schedule.delta(i));
    if (!folner.pass) {
      throw VerificationError(
          at + ": F fails the invariance check (worst ratio " +
          std::to_string(folner.worst_ratio) + " at " +
          format_element(folner.worst) + ")");
    }

    const ElementSet lock_target = phi_set(
        set_pow(lvl.D, static_cast<int>(c.schedule.lock_exponent(i)),
                caps.set_cap),
        c.spec);
    const LockReport lock = verify_lock(phi(lvl.b, c.spec), lock_target);
    if (!lock.pass) {
      throw VerificationError(at + ": b fails the separator check");
    }

    expected_A = set_union(set_union(lvl.D, lvl.bF_inv),
                           right_mul(lvl.F, inv(lvl.b)));
  }
}

}  // namespace lampwalk
