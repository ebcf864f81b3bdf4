#ifndef POLYPROP_POLYPROP_HPP
#define POLYPROP_POLYPROP_HPP

#include "polyprop/consistency.hpp"
#include "polyprop/continuum.hpp"
#include "polyprop/errors.hpp"
#include "polyprop/lattice_state.hpp"
#include "polyprop/polymer_dynamics.hpp"
#include "polyprop/propagators.hpp"
#include "polyprop/special_functions.hpp"
#include "polyprop/summation.hpp"

#endif // POLYPROP_POLYPROP_HPP
