#ifndef QTRAJ_ACCEPTANCE_HPP
#define QTRAJ_ACCEPTANCE_HPP

#include <iosfwd>

namespace qtraj {

/// Run the full verification suite (one pass/fail line per criterion).
/// Returns the number of failed criteria; 0 means everything passed.
int run_acceptance_suite(std::ostream& out);

}  // namespace qtraj

#endif
