#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsres::cli {

enum ExitCode { kOk = 0, kConsistency = 1, kUsage = 2 };

// args excludes the program name. Output goes to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Alpha from a number or a tag: critical-, critical+, critical, lnpi2k:<k>.
double parse_alpha(const std::string& text, const std::string& bc, double y3);

// Flat key=value text or a JSON object (or an output document with a
// "config" member) into key/value pairs in file order.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);

// printf %.17g
std::string format_double(double v);

}  // namespace hsres::cli
