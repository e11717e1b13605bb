#pragma once

namespace sbm {

// Command line entry point; returns the process exit code. Exit 0 reports
// success (SBM, SAT, or generated output), 1 a definite negative answer
// (not SBM, UNSAT), 2 a rejected or invalid input and usage errors.
int cli_main(int argc, const char* const* argv);

}  // namespace sbm
