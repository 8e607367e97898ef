#pragma once

#include <filesystem>
#include <string>

#include "irsjam/learning.hpp"

namespace irsjam {

/// Plain-text checkpoint of a trained LearnerBundle. Doubles are written as
/// hexfloats so the round trip is lossless. `config_hash` ties a checkpoint
/// to the experiment configuration that produced it.
void save_checkpoint(const LearnerBundle& bundle, std::uint64_t config_hash,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
  LearnerBundle bundle;
  std::uint64_t config_hash = 0;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace irsjam
