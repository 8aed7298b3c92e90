#pragma once

// Fast invariant suites over every module; one line per check. Returns the
// number of failures.
int run_verify_suites(bool quiet);
