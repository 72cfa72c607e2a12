#pragma once

#include <string>
#include <string_view>

namespace batchrips {

// 17 significant digits so that write -> read is exact; +inf as "inf".
std::string format_real(double x);

// Accepts decimal reals plus "inf"/"+inf"/"-inf". Rejects trailing junk.
bool parse_real(std::string_view text, double& out);

}  // namespace batchrips
