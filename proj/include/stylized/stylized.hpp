#pragma once

#include "stylized/battery.hpp"
#include "stylized/cluster.hpp"
#include "stylized/commands.hpp"
#include "stylized/distributions.hpp"
#include "stylized/error.hpp"
#include "stylized/garch.hpp"
#include "stylized/ingest.hpp"
#include "stylized/long_memory.hpp"
#include "stylized/nelder_mead.hpp"
#include "stylized/normality.hpp"
#include "stylized/outcome.hpp"
#include "stylized/report.hpp"
#include "stylized/serial_dependence.hpp"
#include "stylized/simulate.hpp"
#include "stylized/stats.hpp"
#include "stylized/tail_index.hpp"
#include "stylized/taylor.hpp"
