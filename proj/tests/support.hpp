#pragma once

#include <array>
#include <string>
#include <vector>

#include "cgtc/relation_fit.hpp"

namespace cgtc::test {

// Rudder angle against heading change at the circle for the reference vessel.
inline std::vector<RelationSample> reference_table() {
    return {{-35, -89.2433}, {-29, -80.761}, {-23, -69.3535}, {-17, -54.8467}, {-11, -37.0651}, {-5, -17.0874},
            {1, 3.8501},     {7, 26.1262},   {13, 46.9387},   {19, 64.3923},   {25, 78.3661},   {31, 89.3798}};
}

inline std::string scenario_path(const std::string& name) { return std::string(CGTC_SCENARIO_DIR) + "/" + name; }

}  // namespace cgtc::test
