#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace llcsim {

// Front door for the llcsim binary. args excludes argv[0]. Returns the
// process exit status: 0 on success, nonzero with a diagnostic on err for
// any parse or validation failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);
int dispatch(const std::vector<std::string>& args);

}  // namespace llcsim
