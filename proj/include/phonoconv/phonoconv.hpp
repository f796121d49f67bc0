#pragma once

// Umbrella header.
#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"
#include "phonoconv/config.hpp"
#include "phonoconv/steady_state.hpp"
#include "phonoconv/closed_form.hpp"
#include "phonoconv/integrator.hpp"
#include "phonoconv/dynamics.hpp"
#include "phonoconv/dark_bright.hpp"
#include "phonoconv/sweep.hpp"
#include "phonoconv/figures.hpp"
#include "phonoconv/io.hpp"
#include "phonoconv/claims.hpp"
#include "phonoconv/typo_ledger.hpp"
