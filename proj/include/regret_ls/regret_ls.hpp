#ifndef REGRET_LS_REGRET_LS_HPP
#define REGRET_LS_REGRET_LS_HPP

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/sdp.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/taylor.hpp"
#include "regret_ls/lmi.hpp"
#include "regret_ls/regret.hpp"
#include "regret_ls/baselines.hpp"
#include "regret_ls/perturbation.hpp"
#include "regret_ls/experiments.hpp"
#include "regret_ls/io.hpp"
#include "regret_ls/validation.hpp"

#endif  // REGRET_LS_REGRET_LS_HPP
