#pragma once

#include "phimix/class_l.hpp"
#include "phimix/errors.hpp"
#include "phimix/fixtures.hpp"
#include "phimix/id_laws.hpp"
#include "phimix/mid_laws.hpp"
#include "phimix/mixing_laws.hpp"
#include "phimix/monte_carlo.hpp"
#include "phimix/pgf_family.hpp"
#include "phimix/random_limits.hpp"
#include "phimix/rng.hpp"
#include "phimix/stats_verify.hpp"
#include "phimix/subordination.hpp"
