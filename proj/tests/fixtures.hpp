#pragma once

#include <string>

#include "padicsum/zeta.hpp"

#ifndef PADICSUM_DATA_DIR
#error "PADICSUM_DATA_DIR must point at data/resolution"
#endif

inline padicsum::ResolutionData fixture(const std::string& name) {
    return padicsum::load_resolution(std::string(PADICSUM_DATA_DIR) + "/" + name + ".json");
}

inline std::string fixture_path(const std::string& name) {
    return std::string(PADICSUM_DATA_DIR) + "/" + name + ".json";
}
