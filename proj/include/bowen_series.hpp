#ifndef BOWEN_SERIES_HPP
#define BOWEN_SERIES_HPP

#include "bowen_series/common.hpp"
#include "bowen_series/mobius.hpp"
#include "bowen_series/domain.hpp"
#include "bowen_series/presets.hpp"
#include "bowen_series/partition.hpp"
#include "bowen_series/coding.hpp"
#include "bowen_series/analysis.hpp"
#include "bowen_series/words.hpp"
#include "bowen_series/oracle.hpp"
#include "bowen_series/ergodic.hpp"
#include "bowen_series/domain_io.hpp"
#include "bowen_series/coding_io.hpp"
#include "bowen_series/action_io.hpp"
#include "bowen_series/report.hpp"

#endif  // BOWEN_SERIES_HPP
