#pragma once

#include "biortho/space.hpp"
#include "biortho/dictionary.hpp"
#include "biortho/forward.hpp"
#include "biortho/backward.hpp"
#include "biortho/oracle.hpp"
#include "biortho/io.hpp"
