#pragma once

namespace hsim {

/// Command-line entry point. Returns 0 when every check passes, 2 when an
/// assertion fails and 1 on usage or runtime errors.
int cli_dispatch(int argc, char** argv);

}  // namespace hsim
