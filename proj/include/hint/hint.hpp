#pragma once

// Umbrella header for the HINT mutual-clustering library.

#include "hint/corpus.hpp"
#include "hint/errors.hpp"
#include "hint/eval.hpp"
#include "hint/hin.hpp"
#include "hint/io.hpp"
#include "hint/matrix.hpp"
#include "hint/mutual.hpp"
#include "hint/rng.hpp"
#include "hint/simmat.hpp"
#include "hint/spectral.hpp"
#include "hint/stiefel.hpp"
#include "hint/synth.hpp"
