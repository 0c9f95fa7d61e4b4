#pragma once

#include "semprosody/concordance.hpp"
#include "semprosody/config.hpp"
#include "semprosody/corpus.hpp"
#include "semprosody/dataset.hpp"
#include "semprosody/error.hpp"
#include "semprosody/hsf.hpp"
#include "semprosody/metrics.hpp"
#include "semprosody/passive.hpp"
#include "semprosody/probe.hpp"
#include "semprosody/prosody.hpp"
#include "semprosody/random.hpp"
#include "semprosody/remote.hpp"
#include "semprosody/report.hpp"
#include "semprosody/resources.hpp"
#include "semprosody/utf8.hpp"
