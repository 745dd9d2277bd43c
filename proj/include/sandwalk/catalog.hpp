#pragma once

#include <string>
#include <vector>

#include "sandwalk/group.hpp"

namespace sandwalk {

/// Catalog file format: one [group] block per entry with
///   name = sol
///   rank = 2
///   modulus = 1
///   phi = 2 1 ; 1 1            (rows separated by ';', entries exact rationals)
///   kernel_gen = a : 1 0       (repeatable)
///   p_plus = t^2-3*t+1         (optional split candidates)
///   p_zero = 1
std::vector<GroupSpec> parse_catalog(const std::string& text);
std::vector<GroupSpec> load_catalog_file(const std::string& path);
std::string serialize_catalog(const std::vector<GroupSpec>& entries);

/// Built-in entries: sol, heisenberg_action, bs12, golden, conner_g1, g2.
const std::vector<GroupSpec>& default_catalog();

const GroupSpec& find_group(const std::vector<GroupSpec>& catalog, const std::string& name);

}  // namespace sandwalk
