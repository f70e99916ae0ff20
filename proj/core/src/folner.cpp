#include "lampwalk/folner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lampwalk/errors.hpp"
#include "lampwalk/u128.hpp"

namespace lampwalk {

namespace {

// |aF \ F| by explicit counting: aF is a bijective image of F, so the count
// is |F| minus the overlap.
std::size_t translate_miss_count(const GroupElement& a, const ElementSet& F) {
  std::vector<GroupElement> aF;
  aF.reserve(F.size());
  for (const GroupElement& f : F) aF.push_back(mul(a, f));
  std::sort(aF.begin(), aF.end());
  // Merge-walk against sorted F to count members of aF inside F.
  std::size_t hit = 0;
  auto it = F.begin();
  for (const GroupElement& x : aF) {
    while (it != F.end() && *it < x) ++it;
    if (it == F.end()) break;
    if (*it == x) ++hit;
  }
  return F.size() - hit;
}

std::size_t checked_pow(std::size_t base, int exp, std::size_t limit) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

// Number of integers in [lo1, hi1] ∩ [lo2, hi2].
std::int64_t overlap_len(std::int64_t lo1, std::int64_t hi1, std::int64_t lo2,
                         std::int64_t hi2) {
  const std::int64_t lo = std::max(lo1, lo2);
  const std::int64_t hi = std::min(hi1, hi2);
  return hi >= lo ? hi - lo + 1 : 0;
}

// Exact |a·B(R,S) ∩ B(R,S)| for the skewed wreath box, divided by 2^(2S+1)
// (the per-base lamp-subset count, which cancels in the pass ratio).
//
// A member (t, L) of B maps to (sigma + t, M Δ (sigma_last + L)). The image
// base must lie in the box range, and the image lamps must fit the window
// W = [sigma_last + t_last - S, sigma_last + t_last + S]. Since sigma_last + L
// always lies inside W and M Δ (sigma_last+L) ⊇ M \ (sigma_last+L) with
// M \ W disjoint from W, the image fits iff M ⊆ W — no lamp choice can cancel
// an out-of-window M-lamp. When M fits, every one of the 2^(2S+1) lamp
// subsets works.
std::uint64_t box_overlap_bases(const GroupElement& a, std::int64_t R,
                                std::int64_t S, int rank) {
  std::uint64_t bases = 1;
  for (int j = 0; j < rank; ++j) {
    const std::int64_t sigma = a.base[static_cast<std::size_t>(j)];
    std::int64_t lo = std::max(-R, -R - sigma);
    std::int64_t hi = std::min(R, R - sigma);
    if (j == rank - 1 && !a.lamps.empty()) {
      const std::int64_t lamp_lo = a.lamps.back() - sigma - S;
      const std::int64_t lamp_hi = a.lamps.front() - sigma + S;
      lo = std::max(lo, lamp_lo);
      hi = std::min(hi, lamp_hi);
    }
    if (hi < lo) return 0;
    bases *= static_cast<std::uint64_t>(hi - lo + 1);
  }
  return bases;
}

ElementSet materialize_box(std::int64_t R, std::int64_t S, int rank) {
  const std::int64_t win = 2 * S + 1;
  std::vector<GroupElement> out;
  std::vector<std::int64_t> t(static_cast<std::size_t>(rank), -R);
  for (;;) {
    const std::int64_t t_last = t.back();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << win); ++m) {
      GroupElement g;
      g.base = t;
      for (std::int64_t bit = 0; bit < win; ++bit) {
        if (m & (std::uint64_t{1} << bit)) g.lamps.push_back(t_last - S + bit);
      }
      out.push_back(std::move(g));
    }
    int j = 0;
    for (; j < rank; ++j) {
      if (t[static_cast<std::size_t>(j)] < R) {
        ++t[static_cast<std::size_t>(j)];
        std::fill(t.begin(), t.begin() + j, -R);
        break;
      }
    }
    if (j == rank) break;
  }
  return ElementSet::from_unsorted(std::move(out));
}

ElementSet materialize_cube(std::int64_t r, int rank) {
  std::vector<GroupElement> out;
  std::vector<std::int64_t> t(static_cast<std::size_t>(rank), -r);
  for (;;) {
    out.push_back(GroupElement{t, {}});
    int j = 0;
    for (; j < rank; ++j) {
      if (t[static_cast<std::size_t>(j)] < r) {
        ++t[static_cast<std::size_t>(j)];
        std::fill(t.begin(), t.begin() + j, -r);
        break;
      }
    }
    if (j == rank) break;
  }
  return ElementSet::from_unsorted(std::move(out));
}

// Final elementwise safety net, skipped only when the work product would be
// enormous (the closed forms above are exact; this guards implementation).
void reverify_if_cheap(const ElementSet& F, const ElementSet& A, double delta) {
  if (F.size() * A.size() > 20'000'000) return;
  if (!verify_folner(F, A, delta).pass) {
    throw VerificationError(
        "closed-form invariant-set score disagrees with elementwise check");
  }
}

ElementSet find_folner_wreath(const ElementSet& A, double delta,
                              const GroupSpec& spec, const ResourceCaps& caps) {
  const int rank = spec.rank();
  bool skipped_over_cap = false;
  for (std::int64_t d = 0;
       d <= static_cast<std::int64_t>(caps.folner_diag_max); ++d) {
    for (std::int64_t R = 0; R <= d; ++R) {
      const std::int64_t S = d - R;
      const std::int64_t win = 2 * S + 1;
      if (win >= 63) {
        skipped_over_cap = true;
        continue;
      }
      const std::size_t bases = checked_pow(
          static_cast<std::size_t>(2 * R + 1), rank, caps.set_cap);
      std::size_t size = caps.set_cap + 1;
      if (bases <= caps.set_cap) {
        const std::size_t lamp_subsets = std::size_t{1}
                                         << static_cast<std::size_t>(win);
        if (win < 40 && bases <= caps.set_cap / lamp_subsets) {
          size = bases * lamp_subsets;
        }
      }
      if (size > caps.set_cap) {
        skipped_over_cap = true;
        continue;
      }
      const std::uint64_t total_bases =
          static_cast<std::uint64_t>(checked_pow(
              static_cast<std::size_t>(2 * R + 1), rank, caps.set_cap));
      bool ok = true;
      for (const GroupElement& a : A) {
        const std::uint64_t kept = box_overlap_bases(a, R, S, rank);
        const std::uint64_t missing = total_bases - kept;
        if (!(static_cast<long double>(missing) <
              static_cast<long double>(delta) *
                  static_cast<long double>(total_bases))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      ElementSet F = materialize_box(R, S, rank);
      reverify_if_cheap(F, A, delta);
      return F;
    }
  }
  if (skipped_over_cap) {
    throw ResourceLimitError(
        "no invariant box within the cardinality cap passed the sweep",
        caps.set_cap);
  }
  throw SearchHorizonError(
      "invariant-set search exhausted its diagonal horizon");
}

ElementSet find_folner_abelian(const ElementSet& A, double delta,
                               const GroupSpec& spec,
                               const ResourceCaps& caps) {
  const int rank = spec.rank();
  for (const GroupElement& a : A) {
    if (!a.lamps.empty()) {
      throw ConfigError("free-abelian family elements must be lampless");
    }
  }
  for (std::int64_t r = 0;
       r <= static_cast<std::int64_t>(caps.folner_diag_max); ++r) {
    const std::size_t size = checked_pow(static_cast<std::size_t>(2 * r + 1),
                                         rank, caps.set_cap);
    if (size > caps.set_cap) {
      // Cube sizes grow monotonically; nothing later can fit.
      throw ResourceLimitError(
          "no invariant cube within the cardinality cap passed the sweep",
          caps.set_cap);
    }
    bool ok = true;
    for (const GroupElement& a : A) {
      std::uint64_t kept = 1;
      for (int j = 0; j < rank; ++j) {
        const std::int64_t sigma = a.base[static_cast<std::size_t>(j)];
        kept *= static_cast<std::uint64_t>(
            overlap_len(-r, r, -r - sigma, r - sigma));
      }
      const std::uint64_t total = static_cast<std::uint64_t>(size);
      if (!(static_cast<long double>(total - kept) <
            static_cast<long double>(delta) * static_cast<long double>(total))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ElementSet F = materialize_cube(r, rank);
    reverify_if_cheap(F, A, delta);
    return F;
  }
  throw SearchHorizonError(
      "invariant-set search exhausted its diagonal horizon");
}

}  // namespace

FolnerReport verify_folner(const ElementSet& F, const ElementSet& A,
                           double delta) {
  if (F.empty()) throw ConfigError("invariance check requires a nonempty set");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ConfigError("invariance tolerance must lie in (0, 1]");
  }
  FolnerReport report;
  report.pass = true;
  report.worst = identity(F[0].base.empty() ? 1
                                            : static_cast<int>(F[0].base.size()));
  report.worst_ratio = 0.0;
  bool have_worst = false;
  for (const GroupElement& a : A) {
    const std::size_t missing = translate_miss_count(a, F);
    const double ratio =
        static_cast<double>(missing) / static_cast<double>(F.size());
    if (!(static_cast<double>(missing) <
          delta * static_cast<double>(F.size()))) {
      report.pass = false;
    }
    if (!have_worst || ratio > report.worst_ratio) {
      report.worst = a;
      report.worst_ratio = ratio;
      have_worst = true;
    }
  }
  return report;
}

ElementSet find_folner(const ElementSet& A, double delta, const GroupSpec& spec,
                       const ResourceCaps& caps) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ConfigError("invariance tolerance must lie in (0, 1]");
  }
  for (const GroupElement& a : A) {
    if (a.base.size() != static_cast<std::size_t>(spec.rank())) {
      throw ConfigError("invariant-set target contains wrong-rank elements");
    }
  }
  if (spec.wreath()) return find_folner_wreath(A, delta, spec, caps);
  return find_folner_abelian(A, delta, spec, caps);
}

}  // namespace lampwalk
