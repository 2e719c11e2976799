#pragma once

#include <string>

#include "rigidity/io.hpp"

namespace rigidity {

// SVG figure for a 2-D framework: one line element per edge, one labeled
// circle per vertex, shared vertices styled distinctly. Coordinates are
// uniformly scaled into an 800x800 viewbox with a 5% margin. Throws Error
// for d != 2.
std::string render_svg(const FrameworkDocument& doc);

}  // namespace rigidity
