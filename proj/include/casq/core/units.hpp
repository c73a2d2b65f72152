// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace casq::units {

// Internal energies are Hartree throughout.
inline constexpr double hartree_to_ev = 27.211386;
inline constexpr double hartree_to_cm = 219474.6313632;
inline constexpr double ev_to_hartree = 1.0 / hartree_to_ev;
inline constexpr double cm_to_hartree = 1.0 / hartree_to_cm;

// Free-electron g value.
inline constexpr double g_electron = 2.002319;

} // namespace casq::units
