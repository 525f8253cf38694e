#pragma once

#include <filesystem>

#include "comanip/trial.hpp"

namespace comanip::io {

/// Read a trial from its JSON Lines interchange form (first line the meta
/// object, one sample object per following line; docs/formats.md). The record
/// is fully validated: malformed lines are parse errors carrying the line
/// number, invariant violations are validation errors naming field and row,
/// and an unrecognized "schema" value is a version error.
TrialRecord read_trial(const std::filesystem::path& path);

/// Write a validated trial. Numbers are written as shortest exact decimals,
/// so read_trial(write_trial(r)) reproduces r exactly and two writes of the
/// same record are byte-identical. Invalid records are refused.
void write_trial(const TrialRecord& record, const std::filesystem::path& path);

} // namespace comanip::io
