#include "lampwalk/packed_measure.hpp"

#include <algorithm>
#include <cmath>

#include "lampwalk/digest.hpp"
#include "lampwalk/errors.hpp"

namespace lampwalk {

namespace {

constexpr int kMaxWindow = 127;
constexpr std::size_t kPairGridLimit = 50'000'000;

std::uint64_t atom_hash(std::int64_t shift, u128 mask) {
  Fnv1a f;
  f.update_i64(shift);
  f.update_u64(static_cast<std::uint64_t>(mask));
  f.update_u64(static_cast<std::uint64_t>(mask >> 64));
  const std::uint64_t h = f.value();
  return h == 0 ? 1 : h;
}

struct Window {
  std::int64_t base = 0;
  int width = 0;
  bool any = false;

  void cover(std::int64_t lo, std::int64_t hi_exclusive) {
    if (lo >= hi_exclusive) return;
    if (!any) {
      base = lo;
      width = static_cast<int>(hi_exclusive - lo);
      any = true;
      return;
    }
    const std::int64_t top =
        std::max(base + static_cast<std::int64_t>(width), hi_exclusive);
    base = std::min(base, lo);
    const std::int64_t w = top - base;
    width = static_cast<int>(w);
    if (w > kMaxWindow) {
      throw ResourceLimitError("packed lamp window exceeds 127 bits",
                               static_cast<std::size_t>(w));
    }
  }
};

void sort_and_check(PackedMeasure& m) {
  std::sort(m.atoms.begin(), m.atoms.end(),
            [](const PackedAtom& a, const PackedAtom& b) {
              if (a.shift != b.shift) return a.shift < b.shift;
              return a.mask < b.mask;
            });
}

u128 lamp_mask(const std::vector<std::int64_t>& lamps, std::int64_t base) {
  u128 m = 0;
  for (const std::int64_t p : lamps) m |= u128{1} << (p - base);
  return m;
}

}  // namespace

PackedMeasure pack_measure(const TruncatedMeasure& m) {
  PackedMeasure out;
  out.deficit = m.deficit;
  bool any = false;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (const GroupElement& g : m.support) {
    if (g.base.size() != 1) {
      throw ConfigError("packed measures require rank-1 elements");
    }
    if (g.lamps.empty()) continue;
    if (!any) {
      lo = g.lamps.front();
      hi = g.lamps.back();
      any = true;
    } else {
      lo = std::min(lo, g.lamps.front());
      hi = std::max(hi, g.lamps.back());
    }
  }
  if (any) {
    const std::int64_t w = hi - lo + 1;
    if (w > kMaxWindow) {
      throw ResourceLimitError("packed lamp window exceeds 127 bits",
                               static_cast<std::size_t>(w));
    }
    out.base = lo;
    out.width = static_cast<int>(w);
  }
  out.atoms.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    PackedAtom a;
    a.shift = m.support[i].base[0];
    a.mask = lamp_mask(m.support[i].lamps, out.base);
    a.mass = m.mass[i];
    out.atoms.push_back(a);
  }
  sort_and_check(out);
  return out;
}

TruncatedMeasure unpack_measure(const PackedMeasure& m) {
  std::vector<std::pair<GroupElement, double>> atoms;
  atoms.reserve(m.atoms.size());
  for (const PackedAtom& a : m.atoms) {
    GroupElement g;
    g.base = {a.shift};
    for (int j = 0; j < std::max(m.width, 1); ++j) {
      if ((a.mask >> j) & 1) g.lamps.push_back(m.base + j);
    }
    atoms.emplace_back(std::move(g), a.mass);
  }
  return aggregate_measure(std::move(atoms), m.deficit);
}

PackedMeasure convolve_packed(const PackedMeasure& m1, const PackedMeasure& m2,
                              std::size_t support_cap) {
  PackedMeasure out;
  out.deficit = 1.0 - (1.0 - m1.deficit) * (1.0 - m2.deficit);
  if (m1.atoms.empty() || m2.atoms.empty()) return out;

  const std::int64_t s_lo = m1.atoms.front().shift;
  const std::int64_t s_hi = m1.atoms.back().shift;
  Window win;
  if (m1.width > 0) win.cover(m1.base, m1.base + m1.width);
  if (m2.width > 0) {
    win.cover(s_lo + m2.base, s_hi + m2.base + m2.width);
  }
  out.base = win.any ? win.base : 0;
  out.width = win.any ? win.width : 0;

  const std::size_t pairs = m1.atoms.size() * m2.atoms.size();
  if (pairs / m1.atoms.size() != m2.atoms.size() || pairs > kPairGridLimit) {
    throw ResourceLimitError("packed convolution pair grid too large", pairs);
  }
  std::vector<PackedAtom> prod;
  prod.reserve(pairs);
  const int k1 = m1.width > 0 ? static_cast<int>(m1.base - out.base) : 0;
  for (const PackedAtom& a : m1.atoms) {
    const u128 left = a.mask << k1;
    const int k2 =
        m2.width > 0 ? static_cast<int>(m2.base + a.shift - out.base) : 0;
    for (const PackedAtom& b : m2.atoms) {
      prod.push_back(PackedAtom{a.shift + b.shift, left ^ (b.mask << k2),
                                a.mass * b.mass});
    }
  }
  std::sort(prod.begin(), prod.end(),
            [](const PackedAtom& a, const PackedAtom& b) {
              if (a.shift != b.shift) return a.shift < b.shift;
              return a.mask < b.mask;
            });
  for (std::size_t i = 0; i < prod.size();) {
    double w = prod[i].mass;
    std::size_t j = i + 1;
    while (j < prod.size() && prod[j].shift == prod[i].shift &&
           prod[j].mask == prod[i].mask) {
      w += prod[j].mass;
      ++j;
    }
    out.atoms.push_back(PackedAtom{prod[i].shift, prod[i].mask, w});
    if (out.atoms.size() > support_cap) {
      throw ResourceLimitError("packed convolution support exceeds the cap",
                               out.atoms.size());
    }
    i = j;
  }
  return out;
}

PackedMeasure left_translate_packed(const GroupElement& g,
                                    const PackedMeasure& m) {
  if (g.base.size() != 1) {
    throw ConfigError("packed measures require rank-1 elements");
  }
  const std::int64_t sigma = g.base[0];
  PackedMeasure out;
  out.deficit = m.deficit;
  if (m.atoms.empty()) return out;
  Window win;
  if (m.width > 0) win.cover(m.base + sigma, m.base + sigma + m.width);
  if (!g.lamps.empty()) win.cover(g.lamps.front(), g.lamps.back() + 1);
  out.base = win.any ? win.base : 0;
  out.width = win.any ? win.width : 0;
  const int km = m.width > 0 ? static_cast<int>(m.base + sigma - out.base) : 0;
  const u128 gmask =
      g.lamps.empty() ? 0 : lamp_mask(g.lamps, out.base);
  out.atoms.reserve(m.atoms.size());
  for (const PackedAtom& a : m.atoms) {
    out.atoms.push_back(
        PackedAtom{sigma + a.shift, gmask ^ (a.mask << km), a.mass});
  }
  sort_and_check(out);
  return out;
}

double tv_packed(const PackedMeasure& m1, const PackedMeasure& m2) {
  // Rebase both mask streams to a common window so keys compare directly.
  Window win;
  if (m1.width > 0) win.cover(m1.base, m1.base + m1.width);
  if (m2.width > 0) win.cover(m2.base, m2.base + m2.width);
  const std::int64_t cb = win.any ? win.base : 0;
  const int k1 = m1.width > 0 ? static_cast<int>(m1.base - cb) : 0;
  const int k2 = m2.width > 0 ? static_cast<int>(m2.base - cb) : 0;

  double tv = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto key_less = [&](const PackedAtom& a, int ka, const PackedAtom& b,
                            int kb) {
    if (a.shift != b.shift) return a.shift < b.shift;
    return (a.mask << ka) < (b.mask << kb);
  };
  while (i < m1.atoms.size() && j < m2.atoms.size()) {
    const PackedAtom& a = m1.atoms[i];
    const PackedAtom& b = m2.atoms[j];
    if (key_less(a, k1, b, k2)) {
      tv += a.mass;
      ++i;
    } else if (key_less(b, k2, a, k1)) {
      tv += b.mass;
      ++j;
    } else {
      tv += std::abs(a.mass - b.mass);
      ++i;
      ++j;
    }
  }
  for (; i < m1.atoms.size(); ++i) tv += m1.atoms[i].mass;
  for (; j < m2.atoms.size(); ++j) tv += m2.atoms[j].mass;
  return tv;
}

PackedIndex::PackedIndex(const PackedMeasure& m) : m_(m) {
  std::size_t slots = 16;
  while (slots < 2 * (m.atoms.size() + 1)) slots <<= 1;
  hash_.assign(slots, 0);
  idx_.assign(slots, 0);
  mask_bits_ = slots - 1;
  for (std::uint32_t i = 0; i < m.atoms.size(); ++i) {
    const std::uint64_t h = atom_hash(m.atoms[i].shift, m.atoms[i].mask);
    std::size_t s = h & mask_bits_;
    while (hash_[s] != 0) s = (s + 1) & mask_bits_;
    hash_[s] = h;
    idx_[s] = i;
  }
}

std::size_t PackedIndex::slot_of(std::int64_t shift, u128 mask) const {
  const std::uint64_t h = atom_hash(shift, mask);
  std::size_t s = h & mask_bits_;
  for (;;) {
    if (hash_[s] == 0) return hash_.size();  // not present
    if (hash_[s] == h) {
      const PackedAtom& a = m_.atoms[idx_[s]];
      if (a.shift == shift && a.mask == mask) return s;
    }
    s = (s + 1) & mask_bits_;
  }
}

double PackedIndex::mass_of(std::int64_t shift, u128 mask) const {
  const std::size_t s = slot_of(shift, mask);
  return s == hash_.size() ? 0.0 : m_.atoms[idx_[s]].mass;
}

bool PackedIndex::contains(std::int64_t shift, u128 mask) const {
  return slot_of(shift, mask) != hash_.size();
}

namespace {

// Applies h = (sigma, M) to a packed atom of m and, when the image's lamps
// fit m's window, produces the image's (shift, mask) key in that window.
// Exact: works in an extended window covering m's window, its sigma-translate,
// and M, then requires every lit bit to fall inside m's window.
struct TranslateKeyer {
  std::int64_t sigma = 0;
  int ext_shift_atom = 0;   // mask << this, into the extended window
  int low = 0;              // m's window starts at this extended-window bit
  int width = 0;            // m's window width
  u128 ext_lamps = 0;       // M in the extended window
  u128 low_bits = 0;        // bits below m's window

  TranslateKeyer(std::int64_t sigma_in,
                 const std::vector<std::int64_t>& lamps,
                 const PackedMeasure& m)
      : sigma(sigma_in), width(m.width) {
    Window win;
    win.cover(m.base, m.base + std::max(m.width, 1));
    win.cover(m.base + sigma, m.base + sigma + std::max(m.width, 1));
    if (!lamps.empty()) win.cover(lamps.front(), lamps.back() + 1);
    ext_shift_atom = static_cast<int>(m.base + sigma - win.base);
    low = static_cast<int>(m.base - win.base);
    ext_lamps = lamps.empty() ? 0 : lamp_mask(lamps, win.base);
    low_bits = low > 0 ? (u128{1} << low) - 1 : 0;
  }

  // Returns true and fills key when (sigma, M) * atom lies in m's window.
  bool key(const PackedAtom& a, std::int64_t* shift, u128* mask) const {
    const u128 ext = ext_lamps ^ (a.mask << ext_shift_atom);
    if ((ext & low_bits) != 0) return false;
    const u128 in_window = ext >> low;
    if (width < kMaxWindow + 1 && (in_window >> width) != 0) return false;
    *shift = sigma + a.shift;
    *mask = in_window;
    return true;
  }
};

}  // namespace

double tv_left_translate(const GroupElement& g, const PackedMeasure& m,
                         const PackedIndex& index) {
  if (g.base.size() != 1) {
    throw ConfigError("packed measures require rank-1 elements");
  }
  const GroupElement gi = inv(g);
  // g^-1 z for the common-support comparison, g x for the missing-mass side.
  const TranslateKeyer inv_key(gi.base[0], gi.lamps, m);
  const TranslateKeyer fwd_key(g.base[0], g.lamps, m);

  double tv = 0.0;
  std::int64_t shift = 0;
  u128 mask = 0;
  for (const PackedAtom& a : m.atoms) {
    // |(g*m)(z) - m(z)| over z in supp m, with (g*m)(z) = m(g^-1 z).
    const double translated =
        inv_key.key(a, &shift, &mask) ? index.mass_of(shift, mask) : 0.0;
    tv += std::abs(translated - a.mass);
    // (g*m)(z) over z = g x outside supp m.
    if (!fwd_key.key(a, &shift, &mask) || !index.contains(shift, mask)) {
      tv += a.mass;
    }
  }
  return tv;
}

}  // namespace lampwalk
