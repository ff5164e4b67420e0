#pragma once

#include "adtof/alignment.hpp"
#include "adtof/annotations.hpp"
#include "adtof/audio.hpp"
#include "adtof/beat_tracker.hpp"
#include "adtof/chart.hpp"
#include "adtof/error.hpp"
#include "adtof/eval.hpp"
#include "adtof/features.hpp"
#include "adtof/labels.hpp"
#include "adtof/manifest.hpp"
#include "adtof/metadata.hpp"
#include "adtof/midi.hpp"
#include "adtof/pipeline.hpp"
#include "adtof/pitch_map.hpp"
#include "adtof/score_filter.hpp"
#include "adtof/splits.hpp"
#include "adtof/stats.hpp"
#include "adtof/timing.hpp"
#include "adtof/vocabulary.hpp"
