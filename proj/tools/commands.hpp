#ifndef IRFKIT_TOOLS_COMMANDS_HPP
#define IRFKIT_TOOLS_COMMANDS_HPP

namespace irfkit::cli {

// Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical error.
int run(int argc, const char* const* argv);

}  // namespace irfkit::cli

#endif
