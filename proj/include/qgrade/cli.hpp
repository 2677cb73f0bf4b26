#pragma once

// Batch front end: one verb per kernel operation, JSON in, JSON out.
// Exit codes: 0 ok, 1 check failed, 2 usage or input error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qgrade/io.hpp"

namespace qgrade::cli {

inline constexpr const char *version = "0.1.0";

const std::vector<std::string> &verbs();

/// args excludes the program name.
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

/// Reproducible random problem specs: `size` Hilbert specs, `size`
/// bilinear cocycles.
io::json corpus(std::uint64_t seed, std::size_t size);

} // namespace qgrade::cli
