#pragma once

#include <filesystem>
#include <vector>

#include "rdlp/runner.hpp"

namespace rdlp {

/// Writes the RDLP curves and cluster sizes of a run into `dir`:
///   rdlp_curves.csv    cluster_id,t,amperes
///   cluster_sizes.csv  cluster_id,size
///   rdlp_curves.svg, cluster_sizes.svg
/// Empty clusters are omitted. Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace rdlp
