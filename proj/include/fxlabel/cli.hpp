#pragma once

#include <string>
#include <vector>

namespace fxlabel {

// Runs one subcommand (label, render, eval, ensemble, audit, perturb,
// relabel). args excludes the program name. Returns 0 on success, 1 on a
// usage error, 2 on a data error.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace fxlabel
