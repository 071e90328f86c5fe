#pragma once

#define WKGEOM_VERSION "0.1.0"
