/* Separable 8x8 forward DCT, fixed point (coefficients scaled by 256). */

const int COEF[8][8] = {
    {  91,   91,   91,   91,   91,   91,   91,   91},
    { 126,  106,   71,   25,  -25,  -71, -106, -126},
    { 118,   49,  -49, -118, -118,  -49,   49,  118},
    { 106,  -25, -126,  -71,   71,  126,   25, -106},
    {  91,  -91,  -91,   91,   91,  -91,  -91,   91},
    {  71, -126,   25,  106, -106,  -25,  126,  -71},
    {  49, -118,  118,  -49,  -49,  118, -118,   49},
    {  25,  -71,  106, -126,  126, -106,   71,  -25}
};

void dct_rows(int in[8][8], int tmp[8][8])
{
    int r;
    int u;
    for (r = 0; r < 8; r++) {
        for (u = 0; u < 8; u++) {
            tmp[r][u] = (COEF[u][0] * in[r][0] +
                COEF[u][1] * in[r][1] +
                COEF[u][2] * in[r][2] +
                COEF[u][3] * in[r][3] +
                COEF[u][4] * in[r][4] +
                COEF[u][5] * in[r][5] +
                COEF[u][6] * in[r][6] +
                COEF[u][7] * in[r][7]) >> 8;
        }
    }
}

void dct_cols(int tmp[8][8], int out[8][8])
{
    int c;
    int u;
    for (c = 0; c < 8; c++) {
        for (u = 0; u < 8; u++) {
            out[u][c] = (COEF[u][0] * tmp[0][c] +
                COEF[u][1] * tmp[1][c] +
                COEF[u][2] * tmp[2][c] +
                COEF[u][3] * tmp[3][c] +
                COEF[u][4] * tmp[4][c] +
                COEF[u][5] * tmp[5][c] +
                COEF[u][6] * tmp[6][c] +
                COEF[u][7] * tmp[7][c]) >> 8;
        }
    }
}

void dct2d(int in[8][8], int out[8][8])
{
    int tmp[8][8];
    dct_rows(in, tmp);
    dct_cols(tmp, out);
}
