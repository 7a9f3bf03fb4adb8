#pragma once

// Umbrella header: the photon-detector kit's complete public surface.

#include "pdk/core/bandwidth.hpp"
#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/fourier.hpp"
#include "pdk/core/parallel.hpp"
#include "pdk/core/phase.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/rng.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/core/uncertainty.hpp"

#include "pdk/network/analysis.hpp"
#include "pdk/network/continued_fraction.hpp"
#include "pdk/network/transfer.hpp"
#include "pdk/network/types.hpp"

#include "pdk/wavepacket/forward.hpp"
#include "pdk/wavepacket/inverse.hpp"
#include "pdk/wavepacket/targets.hpp"
#include "pdk/wavepacket/types.hpp"

#include "pdk/amplification/monte_carlo.hpp"
#include "pdk/amplification/schemes.hpp"
#include "pdk/amplification/thermal.hpp"

#include "pdk/povm/assemble.hpp"
#include "pdk/povm/design.hpp"
#include "pdk/povm/detector.hpp"
#include "pdk/povm/fluctuations.hpp"
#include "pdk/povm/superres.hpp"
#include "pdk/povm/toy.hpp"

#include "pdk/io/config.hpp"
#include "pdk/io/csv.hpp"

#include "pdk/cli/pipelines.hpp"
