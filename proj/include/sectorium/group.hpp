#pragma once

// Finite groups given by explicit multiplication tables.

#include "sectorium/error.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sectorium {

using Element = std::size_t;

/// Raw description of a group as read from a spec file or fixture generator.
struct GroupSpec {
  std::string name;
  std::vector<std::string> labels;
  Element identity = 0;
  std::vector<std::vector<Element>> table;
};

/// A validated finite group. Elements are identified by index; labels are
/// cosmetic. table(g, h) is the index of g*h.
class FiniteGroup {
 public:
  /// Validates the table (shape, Latin square, identity, associativity) and
  /// throws Error naming the first violation.
  static FiniteGroup load(GroupSpec spec) {
    const std::size_t n = spec.table.size();
    if (n == 0) throw Error(ErrorKind::MalformedInput, "group '" + spec.name + "' has empty table");
    if (spec.labels.size() != n) {
      throw Error(ErrorKind::MalformedInput, "group '" + spec.name + "': " +
                                                 std::to_string(spec.labels.size()) + " labels for order " +
                                                 std::to_string(n));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (spec.table[r].size() != n) {
        throw Error(ErrorKind::MalformedInput, "table row " + std::to_string(r) + " has length " +
                                                   std::to_string(spec.table[r].size()));
      }
      for (Element x : spec.table[r]) {
        if (x >= n) {
          throw Error(ErrorKind::MalformedInput,
                      "table row " + std::to_string(r) + " contains out-of-range index " + std::to_string(x));
        }
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<bool> seen(n, false);
      for (Element x : spec.table[r]) {
        if (seen[x]) {
          throw Error(ErrorKind::NotLatinSquare,
                      "row " + std::to_string(r) + " repeats element " + std::to_string(x));
        }
        seen[x] = true;
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<bool> seen(n, false);
      for (std::size_t r = 0; r < n; ++r) {
        const Element x = spec.table[r][c];
        if (seen[x]) {
          throw Error(ErrorKind::NotLatinSquare,
                      "column " + std::to_string(c) + " repeats element " + std::to_string(x));
        }
        seen[x] = true;
      }
    }
    if (spec.identity >= n) {
      throw Error(ErrorKind::NoIdentity, "declared identity " + std::to_string(spec.identity) + " out of range");
    }
    for (Element g = 0; g < n; ++g) {
      if (spec.table[spec.identity][g] != g || spec.table[g][spec.identity] != g) {
        throw Error(ErrorKind::NoIdentity, "declared identity " + std::to_string(spec.identity) +
                                               " fails on element " + std::to_string(g));
      }
    }
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        const Element ab = spec.table[a][b];
        for (Element c = 0; c < n; ++c) {
          if (spec.table[ab][c] != spec.table[a][spec.table[b][c]]) {
            throw Error(ErrorKind::NonAssociative, "triple (" + std::to_string(a) + ", " + std::to_string(b) +
                                                       ", " + std::to_string(c) + ")");
          }
        }
      }
    }
    return FiniteGroup(std::move(spec));
  }

  const std::string& name() const noexcept { return spec_.name; }
  std::size_t order() const noexcept { return spec_.table.size(); }
  Element identity() const noexcept { return spec_.identity; }
  const std::vector<std::string>& labels() const noexcept { return spec_.labels; }
  const std::string& label(Element g) const { return spec_.labels.at(g); }
  const std::vector<std::vector<Element>>& table() const noexcept { return spec_.table; }
  const GroupSpec& spec() const noexcept { return spec_; }

  Element mul(Element g, Element h) const { return spec_.table[g][h]; }
  Element inverse(Element g) const { return inverses_[g]; }
  Element conjugate(Element h, Element g) const { return mul(mul(h, g), inverse(h)); }

  std::optional<Element> find(const std::string& label) const {
    const auto it = std::find(spec_.labels.begin(), spec_.labels.end(), label);
    if (it == spec_.labels.end()) return std::nullopt;
    return static_cast<Element>(it - spec_.labels.begin());
  }

  bool is_abelian() const {
    for (Element g = 0; g < order(); ++g)
      for (Element h = 0; h < order(); ++h)
        if (mul(g, h) != mul(h, g)) return false;
    return true;
  }

  /// True when `subset` is closed under products and inverses and contains e.
  bool is_subgroup(const std::vector<Element>& subset) const {
    std::vector<bool> in(order(), false);
    for (Element g : subset) in[g] = true;
    if (!in[identity()]) return false;
    for (Element a : subset) {
      if (!in[inverse(a)]) return false;
      for (Element b : subset)
        if (!in[mul(a, b)]) return false;
    }
    return true;
  }

  bool is_normal_subgroup(const std::vector<Element>& subset) const {
    if (!is_subgroup(subset)) return false;
    std::vector<bool> in(order(), false);
    for (Element g : subset) in[g] = true;
    for (Element h = 0; h < order(); ++h)
      for (Element a : subset)
        if (!in[conjugate(h, a)]) return false;
    return true;
  }

  /// Subgroup generated by `gens` (closure under multiplication).
  std::vector<Element> generated_subgroup(const std::vector<Element>& gens) const {
    std::vector<bool> in(order(), false);
    std::vector<Element> out{identity()};
    in[identity()] = true;
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (Element s : gens) {
        const Element x = mul(out[k], s);
        if (!in[x]) {
          in[x] = true;
          out.push_back(x);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  explicit FiniteGroup(GroupSpec spec) : spec_(std::move(spec)), inverses_(spec_.table.size()) {
    for (Element g = 0; g < order(); ++g)
      for (Element h = 0; h < order(); ++h)
        if (mul(g, h) == identity()) inverses_[g] = h;
  }

  GroupSpec spec_;
  std::vector<Element> inverses_;
};

struct ConjugacyStructure {
  std::vector<std::vector<Element>> classes;  // sorted, class containing e first
  std::vector<std::size_t> class_of;
  std::vector<Element> center;
};

/// Conjugacy classes as orbits of h g h^-1; center by direct commutation test.
inline ConjugacyStructure conjugacy_structure(const FiniteGroup& group) {
  const std::size_t n = group.order();
  ConjugacyStructure out;
  out.class_of.assign(n, n);
  std::vector<Element> order(n);
  std::iota(order.begin(), order.end(), Element{0});
  std::stable_partition(order.begin(), order.end(), [&](Element g) { return g == group.identity(); });
  for (Element g : order) {
    if (out.class_of[g] != n) continue;
    std::vector<Element> cls;
    for (Element h = 0; h < n; ++h) cls.push_back(group.conjugate(h, g));
    std::sort(cls.begin(), cls.end());
    cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    for (Element x : cls) out.class_of[x] = out.classes.size();
    out.classes.push_back(std::move(cls));
  }
  for (Element g = 0; g < n; ++g) {
    bool central = true;
    for (Element h = 0; h < n && central; ++h) central = group.mul(g, h) == group.mul(h, g);
    if (central) out.center.push_back(g);
  }
  return out;
}

}  // namespace sectorium
