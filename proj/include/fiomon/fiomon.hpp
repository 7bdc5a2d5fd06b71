#pragma once

#include "fiomon/civil_time.hpp"
#include "fiomon/corpus.hpp"
#include "fiomon/error.hpp"
#include "fiomon/keyword_filter.hpp"
#include "fiomon/model_file.hpp"
#include "fiomon/pipeline.hpp"
#include "fiomon/svm.hpp"
#include "fiomon/timeline.hpp"
#include "fiomon/vectorizer.hpp"
