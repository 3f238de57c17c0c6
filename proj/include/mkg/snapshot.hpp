#pragma once

#include "mkg/state.hpp"

#include <cstdint>
#include <string>

namespace mkg
{

// Binary snapshot layout, all little-endian:
//   "MKG1" | u32 n | f64 L | f64 time | u8 layout | components...
// Each component is n^3 (re, im) f64 pairs of physical samples, x fastest.
// Layout 1 stores A0, A0_t, A1, A2, A3, A1_t, A2_t, A3_t, phi, phi_t.
constexpr std::uint8_t snapshot_layout_full = 1;

void write_snapshot(const std::string& path, const GaugeState& st);
GaugeState read_snapshot(const std::string& path);

} // namespace mkg
