#ifndef CONFORMAL_DATASET_HPP
#define CONFORMAL_DATASET_HPP

#include "conformal/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace conformal {

/// A CSV-backed dataset: header x1,...,xp,y, one labeled point per row, and
/// an optional trailing feature-only row naming the prediction point.
struct Dataset {
  Sample sample;
  std::optional<Eigen::VectorXd> prediction_features;
};

/// Comma-separated, first line header, decimal point, scientific notation
/// accepted. Throws std::invalid_argument on any malformed content.
Dataset parse_dataset(std::istream& in);
Dataset read_dataset(const std::string& path);

/// Values are written with 17 significant digits, so read-back reproduces
/// every double bit-for-bit.
void write_dataset(std::ostream& out, const Dataset& dataset);
void write_dataset(const std::string& path, const Dataset& dataset);

/// FNV-1a over raw bytes; the inputs hash echoed into run reports.
std::uint64_t fnv1a(std::string_view bytes);
std::string file_digest(const std::string& path);

}  // namespace conformal

#endif  // CONFORMAL_DATASET_HPP
