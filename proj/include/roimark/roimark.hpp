#pragma once

#include "roimark/authmark.hpp"
#include "roimark/bits.hpp"
#include "roimark/codec.hpp"
#include "roimark/engine.hpp"
#include "roimark/error.hpp"
#include "roimark/image.hpp"
#include "roimark/md5.hpp"
#include "roimark/metrics.hpp"
#include "roimark/pgm.hpp"
#include "roimark/phantom.hpp"
#include "roimark/tamper.hpp"
