// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/// @file casq.hpp
/// @brief Umbrella header.

#pragma once

#include <casq/casci/davidson.hpp>
#include <casq/casci/decompose.hpp>
#include <casq/casci/density.hpp>
#include <casq/casci/hamiltonian.hpp>
#include <casq/casci/multiplet.hpp>
#include <casq/casci/slater_condon.hpp>
#include <casq/casci/solver.hpp>
#include <casq/casci/spin.hpp>
#include <casq/core/error.hpp>
#include <casq/core/parallel.hpp>
#include <casq/core/units.hpp>
#include <casq/detspace/cas_space.hpp>
#include <casq/detspace/determinant.hpp>
#include <casq/ingest/fcidump.hpp>
#include <casq/ingest/integrals.hpp>
#include <casq/ingest/ligand_field.hpp>
#include <casq/ingest/model_integrals.hpp>
#include <casq/ingest/property_integrals.hpp>
#include <casq/ingest/run_config.hpp>
#include <casq/soc/gap_report.hpp>
#include <casq/soc/gtensor.hpp>
#include <casq/soc/qdpt.hpp>
#include <casq/soc/soc_matrix.hpp>
#include <casq/spectra/spectrum.hpp>
#include <casq/report.hpp>
