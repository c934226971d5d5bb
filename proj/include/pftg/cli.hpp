#ifndef PFTG_CLI_HPP
#define PFTG_CLI_HPP

namespace pftg {

/// Command-line entry point. Subcommands:
///   run --config F [--resume SNAP]
///   steady --config F --mu-s X
///   sweep-alpha --config F --alphas a1,a2,...
///   sweep-eps --potential K --eps e1,... --points r1,... [--kappa K]
///   validate --config F
///   probe-dependence --config F --deltas d1,...
/// Returns 0 on success, 1 on validation failure, 2 on usage errors.
int cli_main(int argc, const char* const* argv);

} // namespace pftg

#endif
