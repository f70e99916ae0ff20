#include "lampwalk/lock.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lampwalk/digest.hpp"
#include "lampwalk/errors.hpp"

namespace lampwalk {

namespace {

struct PairRecord {
  std::uint64_t digest;
  std::uint32_t i;
  std::uint32_t j;
};

// Screening sets for the difference-set criterion; absent when materializing
// them tripped the internal cap (the search then falls back to running the
// full quadratic check on every candidate).
struct Screen {
  ElementSet U;  // A^-1 A
  ElementSet V;  // A A^-1
  bool ok = false;
};

Screen build_screen(const ElementSet& A) {
  constexpr std::size_t kScreenCap = 8'000'000;
  Screen s;
  try {
    const ElementSet Ainv = set_inv(A);
    s.U = set_mul(Ainv, A, kScreenCap);
    s.V = set_mul(A, Ainv, kScreenCap);
    s.ok = true;
  } catch (const ResourceLimitError&) {
    s.ok = false;
  }
  return s;
}

// Exact candidate screen. Equivalences used:
//   x*b*y == x'*b*y' for (x,y) != (x',y')
//     <=>  u*b == b*v with u = x'^-1 x in U\{e}, v = y' y^-1 in V\{e}
//     <=>  exists v in V\{e} with b*v*b^-1 in U\{e};
//   A ∩ A*b*A nonempty  <=>  exists y in A with b*y in U   (u = x^-1 a).
bool screen_pass(const GroupElement& b, const ElementSet& A, const Screen& s) {
  const GroupElement binv = inv(b);
  const bool iterate_V = s.V.size() <= s.U.size();
  const ElementSet& small = iterate_V ? s.V : s.U;
  const ElementSet& other = iterate_V ? s.U : s.V;
  for (const GroupElement& w : small) {
    if (is_identity(w)) continue;
    const GroupElement conj =
        iterate_V ? mul(mul(b, w), binv) : mul(mul(binv, w), b);
    if (!is_identity(conj) && other.contains(conj)) return false;
  }
  for (const GroupElement& a : A) {
    if (s.U.contains(mul(b, a))) return false;
  }
  return true;
}

// Checks a screened candidate exhaustively; a screen/verify disagreement
// would mean one of the two exact checks is wrong, so it is fatal.
bool confirm(const GroupElement& b, const ElementSet& A, bool screened) {
  const LockReport rep = verify_lock(b, A);
  if (screened && !rep.pass) {
    throw VerificationError(
        "separator screen accepted a candidate the exhaustive check rejects");
  }
  return rep.pass;
}

}  // namespace

LockReport verify_lock(const GroupElement& b, const ElementSet& A) {
  LockReport report;
  const std::size_t n = A.size();
  if (n == 0) {
    report.pass = true;
    return report;
  }
  if (n > 8'192) {  // 16-byte records; n^2 of them must stay around 1 GiB
    throw ResourceLimitError("separator verification pair table too large",
                             n * n);
  }

  // Digest index of A for the disjointness side.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> a_digests;
  a_digests.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    a_digests.emplace_back(element_digest(A[i]), i);
  }
  std::sort(a_digests.begin(), a_digests.end());

  std::vector<GroupElement> left;  // A[i] * b
  left.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) left.push_back(mul(A[i], b));

  std::vector<PairRecord> records;
  records.reserve(n * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const GroupElement prod = mul(left[i], A[j]);
      const std::uint64_t dg = element_digest(prod);
      records.push_back(PairRecord{dg, i, j});
      auto it = std::lower_bound(
          a_digests.begin(), a_digests.end(), dg,
          [](const auto& e, std::uint64_t v) { return e.first < v; });
      for (; it != a_digests.end() && it->first == dg; ++it) {
        if (A[it->second] == prod) {
          // Disjointness violations are reported first, at the smallest
          // (i, j) in row-major pair order — this is that pair.
          LockWitness w;
          w.kind = LockWitness::Kind::disjointness;
          w.a1 = A[i];
          w.a2 = A[j];
          w.member = prod;
          report.pass = false;
          report.witness = w;
          return report;
        }
      }
    }
  }

  std::sort(records.begin(), records.end(),
            [](const PairRecord& x, const PairRecord& y) {
              if (x.digest != y.digest) return x.digest < y.digest;
              if (x.i != y.i) return x.i < y.i;
              return x.j < y.j;
            });
  // Collect every exact collision and report the one earliest in row-major
  // pair order, so the witness is independent of digest ordering.
  std::optional<LockWitness> collision;
  std::uint64_t best_key = ~std::uint64_t{0};
  const auto pair_key = [n](std::uint32_t i, std::uint32_t j) {
    return static_cast<std::uint64_t>(i) * n + j;
  };
  for (std::size_t s = 0; s < records.size();) {
    std::size_t e = s + 1;
    while (e < records.size() && records[e].digest == records[s].digest) ++e;
    if (e - s > 1) {
      // Digest tie: recompute the few products involved and compare exactly.
      for (std::size_t x = s; x < e; ++x) {
        const GroupElement px = mul(left[records[x].i], A[records[x].j]);
        for (std::size_t y = x + 1; y < e; ++y) {
          const GroupElement py = mul(left[records[y].i], A[records[y].j]);
          if (px != py) continue;
          const std::uint64_t k1 = pair_key(records[x].i, records[x].j);
          const std::uint64_t k2 = pair_key(records[y].i, records[y].j);
          const std::uint64_t key = std::min(k1, k2);
          if (key < best_key) {
            best_key = key;
            LockWitness w;
            w.kind = LockWitness::Kind::injectivity;
            const bool x_first = k1 < k2;
            const PairRecord& rx = x_first ? records[x] : records[y];
            const PairRecord& ry = x_first ? records[y] : records[x];
            w.a1 = A[rx.i];
            w.a2 = A[rx.j];
            w.a1b = A[ry.i];
            w.a2b = A[ry.j];
            collision = w;
          }
        }
      }
    }
    s = e;
  }
  if (collision) {
    report.pass = false;
    report.witness = collision;
    return report;
  }
  report.pass = true;
  return report;
}

GroupElement find_lock(const ElementSet& A, const GroupSpec& spec,
                       const ResourceCaps& caps) {
  if (A.empty()) throw ConfigError("separator search requires a nonempty set");
  for (const GroupElement& a : A) {
    if (a.base.size() != static_cast<std::size_t>(spec.rank())) {
      throw ConfigError("separator target contains wrong-rank elements");
    }
  }

  const Screen screen = build_screen(A);
  const auto admissible = [&](const GroupElement& b) {
    if (screen.ok) {
      return screen_pass(b, A, screen) && confirm(b, A, /*screened=*/true);
    }
    return confirm(b, A, /*screened=*/false);
  };

  const std::vector<GroupElement> prefix =
      enumerate_elements(spec, caps.lock_enum_horizon);
  for (const GroupElement& b : prefix) {
    if (admissible(b)) return b;
  }

  if (spec.wreath()) {
    std::int64_t W = 0;
    std::int64_t T = 0;
    for (const GroupElement& a : A) {
      T = std::max(T, std::abs(a.base.back()));
      if (!a.lamps.empty()) {
        W = std::max({W, std::abs(a.lamps.front()), std::abs(a.lamps.back())});
      }
    }
    const std::int64_t m = W + T + 1;
    for (std::size_t slack = 0; slack <= caps.marker_slack_max; ++slack) {
      GroupElement b;
      b.base.assign(static_cast<std::size_t>(spec.rank()), 0);
      b.base.back() = 2 * W + T + 1 + static_cast<std::int64_t>(slack);
      b.lamps = {-m};
      if (admissible(b)) return b;
    }
  }

  throw SearchHorizonError(
      "separator search exhausted its candidate horizon (expected on the "
      "free-abelian control, where no separator exists for sets of size 2 "
      "or more)");
}

}  // namespace lampwalk
