#pragma once

#include <iosfwd>
#include <string>

#include "chebcov/moments.hpp"

namespace chebcov {

/// Versioned JSON serialization of a MomentModel. Doubles are written in
/// shortest-exact form, so save -> load reproduces the model bit for bit.
std::string save_model_json(const MomentModel& model);

/// Parses a ModelFile and rebuilds the model (the spectral decomposition is
/// recomputed from the stored covariance). Throws InvalidInput on malformed
/// or internally inconsistent files.
MomentModel load_model_json(const std::string& text);

MomentModel load_model_file(const std::string& path);

}  // namespace chebcov
