#pragma once

// Command-line front end. Verbs: simulate, map, equilibria, basins, payment,
// verify, gen. Exit status 0 on success, 1 on domain errors (bad scenario,
// infeasible plan, failed verification), 2 on usage errors.

#include <ostream>
#include <string>
#include <vector>

namespace fedpart {

// `args` excludes the program name. Data goes to --out or `out`; every
// diagnostic goes to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fedpart
