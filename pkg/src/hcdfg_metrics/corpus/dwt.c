/* One level of a 2D Haar wavelet computed with lifting steps.
   Each 1D pass splits a row (or column) into averages (first half)
   and details (second half). */

void dwt_predict_h(int x[8][8], int y[8][8])
{
    int r;
    int i;
    for (r = 0; r < 8; r++) {
        for (i = 0; i < 4; i++) {
            y[r][4 + i] = x[r][2 * i + 1] - x[r][2 * i];
        }
    }
}

void dwt_update_h(int x[8][8], int y[8][8])
{
    int r;
    int i;
    for (r = 0; r < 8; r++) {
        for (i = 0; i < 4; i++) {
            y[r][i] = x[r][2 * i] + ((x[r][2 * i + 1] - x[r][2 * i]) >> 1);
        }
    }
}

void dwt_predict_v(int x[8][8], int y[8][8])
{
    int c;
    int i;
    for (c = 0; c < 8; c++) {
        for (i = 0; i < 4; i++) {
            y[4 + i][c] = x[2 * i + 1][c] - x[2 * i][c];
        }
    }
}

void dwt_update_v(int x[8][8], int y[8][8])
{
    int c;
    int i;
    for (c = 0; c < 8; c++) {
        for (i = 0; i < 4; i++) {
            y[i][c] = x[2 * i][c] + ((x[2 * i + 1][c] - x[2 * i][c]) >> 1);
        }
    }
}

void dwt1d_h(int x[8][8], int y[8][8])
{
    dwt_predict_h(x, y);
    dwt_update_h(x, y);
}

void dwt1d_v(int x[8][8], int y[8][8])
{
    dwt_predict_v(x, y);
    dwt_update_v(x, y);
}

void dwt2d(int img[8][8], int out[8][8])
{
    int mid[8][8];
    dwt1d_h(img, mid);
    dwt1d_v(mid, out);
}
