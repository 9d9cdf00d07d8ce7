#pragma once

#include <string>

#include "fleetmdp/ingest.hpp"

namespace fleetmdp {

/// Instance directory layout:
///   network.json, meta.json, initial_states.jsonl,
///   paths/train_0000.jsonl ... paths/test_0000.jsonl ...
void save_instance(const Instance& inst, const std::string& dir);
Instance load_instance(const std::string& dir);

/// Content hash over network.json + meta.json, recorded in manifests and
/// table files so artifacts can be matched to their instance.
uint64_t instance_content_hash(const std::string& dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fleetmdp
