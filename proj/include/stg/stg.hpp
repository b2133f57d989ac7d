#pragma once

#include "stg/category.hpp"
#include "stg/corpus.hpp"
#include "stg/decoder.hpp"
#include "stg/distribution.hpp"
#include "stg/estimation.hpp"
#include "stg/evaluation.hpp"
#include "stg/model_io.hpp"
#include "stg/notation.hpp"
#include "stg/parse.hpp"
#include "stg/schema.hpp"
