#pragma once

#include "curvecur/rational.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace curvecur::cli {

// Runs one command (args exclude the program name). JSON goes to out, a short
// summary to err. Returns 0, 1 when a verified property fails, 2 on bad input.
int cmd_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SawtoothPoint {
  long p = 0;
  long q = 1;
  Rational value;  // weight times stable word length
  bool tail_detected = false;
};

// Every reduced p/q in [0, 1] with q <= max_den, under generators (a, a², b).
std::vector<SawtoothPoint> sawtooth(int max_den, int n = 64);
std::string sawtooth_csv(const std::vector<SawtoothPoint>& pts);
std::string sawtooth_svg(const std::vector<SawtoothPoint>& pts);

}  // namespace curvecur::cli
