#pragma once

// Umbrella header: harmonic analysis on the 2-dimensional quantum torus —
// Fourier polynomials over the rotation algebra, rational matrix models,
// L_p norm estimation, Fourier-multiplier lower bounds, cyclic-group
// transference, measure constructions, and Diophantine sequence searches.

#include "convergents.hpp"
#include "cyclic.hpp"
#include "diophantine.hpp"
#include "experiments.hpp"
#include "matrix_model.hpp"
#include "measures.hpp"
#include "optimize.hpp"
#include "qpoly.hpp"
#include "rng.hpp"
#include "serialize.hpp"
#include "symbols.hpp"
#include "theta.hpp"
