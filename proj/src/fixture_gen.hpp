#pragma once

// The committed files under fixtures/ are exactly what these functions
// produce; sectorium-fixtures regenerates them.

#include "sectorium/sectorium.hpp"

#include <map>
#include <string>

namespace sectorium::fixtures {

inline std::vector<io::CoverSpec> bundled_covers() {
  return {
      // |Q| = 5 ring with one chord; voltages generate S3
      {5, "s3", {{0, 1, "(012)"}, {1, 2, "e"}, {2, 3, "(01)"}, {3, 4, "e"}, {4, 0, "e"}, {0, 2, "(12)"}}},
      // voltages stay inside {e, (01)}: three sheets-pairs, not connected
      {3, "s3", {{0, 1, "(01)"}, {1, 2, "e"}, {2, 0, "(01)"}}},
      {3, "z6", {{0, 1, "e"}, {1, 2, "g2"}, {2, 0, "g3"}}},
      {4, "q8", {{0, 1, "i"}, {1, 2, "1"}, {2, 3, "j"}, {3, 0, "1"}, {1, 3, "k"}}},
      {2, "d8star", {{0, 1, "i"}, {1, 0, "j"}, {0, 1, "-k"}}},
  };
}

inline std::vector<std::string> bundled_cover_names() {
  return {"s3_ring", "s3_split", "z6_triangle", "q8_square", "d8star_pair"};
}

/// File name -> content for every committed fixture.
inline std::map<std::string, io::json> fixture_files() {
  std::map<std::string, io::json> out;
  for (const auto& name : bundled_names()) {
    const auto group = FiniteGroup::load(*bundled_group(name));
    out[name + ".group.json"] = io::to_json(group.spec());
    out[name + ".irreps.json"] = io::to_json(name, group, *bundled_irreps(name));
  }
  const auto covers = bundled_covers();
  const auto names = bundled_cover_names();
  for (std::size_t k = 0; k < covers.size(); ++k) out[names[k] + ".cover.json"] = io::to_json(covers[k]);
  return out;
}

}  // namespace sectorium::fixtures
