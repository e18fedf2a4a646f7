#pragma once

#include "leaklint/analyze.hpp"
#include "leaklint/cli.hpp"
#include "leaklint/corpus.hpp"
#include "leaklint/detect.hpp"
#include "leaklint/errors.hpp"
#include "leaklint/fix.hpp"
#include "leaklint/flow.hpp"
#include "leaklint/lexer.hpp"
#include "leaklint/model.hpp"
#include "leaklint/parse.hpp"
#include "leaklint/report.hpp"
#include "leaklint/source_unit.hpp"
#include "leaklint/span.hpp"
#include "leaklint/taxonomy.hpp"
#include "leaklint/version.hpp"
