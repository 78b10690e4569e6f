#pragma once

#include "robinbox/box.hpp"
#include "robinbox/dynamics.hpp"
#include "robinbox/errors.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/momentum.hpp"
#include "robinbox/observables.hpp"
#include "robinbox/quadrature.hpp"
#include "robinbox/roots.hpp"
#include "robinbox/spectrum.hpp"
#include "robinbox/state_spec.hpp"
#include "robinbox/states.hpp"
#include "robinbox/uncertainty.hpp"
#include "robinbox/wavefunction.hpp"
