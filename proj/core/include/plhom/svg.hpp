#pragma once

#include <string>

#include "plhom/towers.hpp"

namespace plhom::svg {

/// Deterministic SVG emitters: a fixed 1000x1000 viewport, rationals
/// rendered at six decimal places for display only. Identical inputs yield
/// byte-identical output.

/// Graph of the map as a polyline over the unit square.
std::string plot(const PLMap& f);

/// One polyline per generator, with a legend.
std::string plot(const GroupSpec& G);

/// Nested horizontal interval bars, the smallest orbital at the bottom.
std::string plot(const Tower& T);

}  // namespace plhom::svg
