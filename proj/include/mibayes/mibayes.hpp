#pragma once

#include "mibayes/contingency_table.hpp"
#include "mibayes/dataset.hpp"
#include "mibayes/distribution.hpp"
#include "mibayes/errors.hpp"
#include "mibayes/filters.hpp"
#include "mibayes/harness.hpp"
#include "mibayes/log.hpp"
#include "mibayes/missing_data.hpp"
#include "mibayes/moments.hpp"
#include "mibayes/monte_carlo.hpp"
#include "mibayes/naive_bayes.hpp"
#include "mibayes/random.hpp"
#include "mibayes/report.hpp"
#include "mibayes/special_functions.hpp"
#include "mibayes/ttest.hpp"
