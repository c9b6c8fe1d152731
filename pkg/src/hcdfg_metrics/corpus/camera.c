/* Pixel-level kernels of a small smart-camera pipeline on 16x16 frames. */

void add_img(int a[16][16], int b[16][16], int out[16][16])
{
    int r;
    int c;
    for (r = 0; r < 16; r++) {
        for (c = 0; c < 16; c++) {
            out[r][c] = a[r][c] + b[r][c];
        }
    }
}

void sub_img(int a[16][16], int b[16][16], int out[16][16])
{
    int r;
    int c;
    for (r = 0; r < 16; r++) {
        for (c = 0; c < 16; c++) {
            out[r][c] = a[r][c] - b[r][c];
        }
    }
}

void div_img(int a[16][16], int k, int out[16][16])
{
    int r;
    int c;
    for (r = 0; r < 16; r++) {
        for (c = 0; c < 16; c++) {
            out[r][c] = a[r][c] / k;
        }
    }
}

void threshold(int a[16][16], int level, int out[16][16])
{
    int r;
    int c;
    for (r = 0; r < 16; r++) {
        for (c = 0; c < 16; c++) {
            if (a[r][c] > level) {
                out[r][c] = 1;
            } else {
                out[r][c] = 0;
            }
        }
    }
}

void erod_bin(int a[16][16], int out[16][16])
{
    int r;
    int c;
    for (r = 1; r < 15; r++) {
        for (c = 1; c < 15; c++) {
            out[r][c] = a[r - 1][c] & a[r + 1][c] & a[r][c - 1] & a[r][c + 1] & a[r][c];
        }
    }
}

void histogram(int a[16][16], int hist[256])
{
    int r;
    int c;
    for (r = 0; r < 256; r++) {
        hist[r] = 0;
    }
    for (r = 0; r < 16; r++) {
        for (c = 0; c < 16; c++) {
            hist[a[r][c]] = hist[a[r][c]] + 1;
        }
    }
}

int test_gravity(int a[16][16], int centre[2])
{
    int r;
    int c;
    int sx;
    int sy;
    int n;
    sx = 0;
    sy = 0;
    n = 0;
    for (r = 0; r < 16; r++) {
        for (c = 0; c < 16; c++) {
            sx = sx + a[r][c] * c;
            sy = sy + a[r][c] * r;
            n = n + a[r][c];
        }
    }
    if (n > 0) {
        centre[0] = sx / n;
        centre[1] = sy / n;
    }
    return n;
}

int classify_motion(int area, int prev_area)
{
    int d;
    int level;
    d = area - prev_area;
    switch (d >> 4) {
    case 0:
        level = 0;
        break;
    case 1:
    case -1:
        level = 1;
        break;
    default:
        level = 2;
    }
    return level;
}

int first_edge(int row[16], int level)
{
    int c;
    c = 0;
    while (row[c] < level) {
        c = c + 1;
    }
    return c;
}
