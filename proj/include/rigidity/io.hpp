#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rigidity/stress.hpp"
#include "rigidity/types.hpp"

namespace rigidity {

// Text document holding a framework, an optional stress block (off-diagonal
// edge entries only; diagonals are reconstructed from the zero-row-sum rule
// at parse time) and optional attachment metadata. Labels are 1-based.
struct FrameworkDocument {
  Framework framework;
  std::optional<StressMatrix> stress;
  std::vector<int> shared;  // 0-based vertex indices; empty if absent
};

FrameworkDocument parse_document(std::istream& in);
FrameworkDocument load_document(const std::string& path);

// Numbers are written with 17 significant digits so parse(serialize(x))
// reproduces every finite double bit-exactly.
std::string serialize_document(const FrameworkDocument& doc);
void save_document(const FrameworkDocument& doc, const std::string& path);

}  // namespace rigidity
