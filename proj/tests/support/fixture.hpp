#pragma once

// Deterministic measles-like test fixture: 17 districts, 104 weekly counts,
// generated from a seeded epidemic/endemic model with strong first-order
// neighborhood decay. Two peripheral districts stay at zero, mirroring a
// panel where only 15 areas record cases.

#include <string>

#include "epicount/model_spec.hpp"
#include "epicount/panel.hpp"
#include "epicount/spatial.hpp"

namespace epicount::testsupport {

struct Fixture {
  SurveillancePanel panel;
  SpatialStructure spatial;
  EeSpec spec;
  ParamVector truth;
};

SpatialStructure make_fixture_spatial();
Fixture make_measles_fixture();

/// Writes counts.csv, populations.csv and spatial.json under dir (created if
/// missing); returns the directory path.
std::string write_fixture_files(const Fixture& fixture, const std::string& dir);

}  // namespace epicount::testsupport
