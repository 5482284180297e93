#pragma once

#include <filesystem>
#include <string>

#include "mel/instance.hpp"

namespace test {

inline std::filesystem::path instance_path(const std::string& name) {
  return std::filesystem::path(MEL_INSTANCE_DIR) / (name + ".mel");
}

inline mel::Instance load(const std::string& name) { return mel::load_instance(instance_path(name)); }

inline const char* const kCorpus[] = {"identity2_f3", "identity3_f3", "sigma2_f3",    "sigma2_f2", "sigma2_f4",
                                      "sigma3_f3",    "sigma3_f2",    "frobenius_f2", "graph_f3",  "rank2_f3"};

}  // namespace test
