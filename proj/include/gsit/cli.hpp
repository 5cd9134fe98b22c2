#ifndef GSIT_CLI_HPP
#define GSIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gsit::lab {

// Dispatches the CLI subcommands (verify, bench, train, masks, disorder).
// Returns 0 on success, 1 when a check fails or training diverges, 2 on
// usage or configuration errors. Output is byte-stable for identical
// arguments.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gsit::lab

#endif
