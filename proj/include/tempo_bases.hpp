#pragma once

#include "tempo_bases/basis.hpp"
#include "tempo_bases/delay_bench.hpp"
#include "tempo_bases/dlop.hpp"
#include "tempo_bases/factory.hpp"
#include "tempo_bases/filtering.hpp"
#include "tempo_bases/io.hpp"
#include "tempo_bases/ldn.hpp"
#include "tempo_bases/lti_recon.hpp"
#include "tempo_bases/sliding.hpp"
