#pragma once

#include "holo/any_codec.hpp"
#include "holo/codec.hpp"
#include "holo/combinatorics.hpp"
#include "holo/error.hpp"
#include "holo/evaluation.hpp"
#include "holo/external_codec.hpp"
#include "holo/holographic.hpp"
#include "holo/image.hpp"
#include "holo/optimizer.hpp"
#include "holo/packet_set.hpp"
#include "holo/pgm.hpp"
#include "holo/rate.hpp"
#include "holo/shift.hpp"
