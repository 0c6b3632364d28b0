#pragma once

#include "gravclass/core.hpp"
#include "gravclass/dataset_io.hpp"
#include "gravclass/evaluation.hpp"
#include "gravclass/prob_predictor.hpp"
#include "gravclass/sim_predictor.hpp"
#include "gravclass/spatial_index.hpp"
#include "gravclass/trainer.hpp"
