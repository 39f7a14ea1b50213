#pragma once

#include "gpsrad/orthopoly.hpp"
#include "gpsrad/mapping.hpp"
#include "gpsrad/potentials.hpp"
#include "gpsrad/symmetric_eigen.hpp"
#include "gpsrad/solver.hpp"
#include "gpsrad/golden.hpp"
