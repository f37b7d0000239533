#pragma once

#include "hark/audio.hpp"
#include "hark/dataset.hpp"
#include "hark/dsp.hpp"
#include "hark/errors.hpp"
#include "hark/features.hpp"
#include "hark/knn.hpp"
#include "hark/model_io.hpp"
#include "hark/model_selection.hpp"
#include "hark/parallel.hpp"
#include "hark/svm.hpp"
#include "hark/util.hpp"
