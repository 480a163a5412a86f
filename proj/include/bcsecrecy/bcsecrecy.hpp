#pragma once

#include "bcsecrecy/channel_io.hpp"
#include "bcsecrecy/channels.hpp"
#include "bcsecrecy/coding.hpp"
#include "bcsecrecy/distributions.hpp"
#include "bcsecrecy/error.hpp"
#include "bcsecrecy/frontier.hpp"
#include "bcsecrecy/gaussian.hpp"
#include "bcsecrecy/information.hpp"
#include "bcsecrecy/region.hpp"
#include "bcsecrecy/simplex_grid.hpp"
