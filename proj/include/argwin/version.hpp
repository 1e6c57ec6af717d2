#pragma once

#define ARGWIN_VERSION "0.1.0"
