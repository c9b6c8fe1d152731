/* Five independent computations, each a single dependence chain. */

void five_blocks(int in[5], int out[5])
{
    {
        out[0] = ((in[0] + 3) * 5) - 1;
    }
    {
        out[1] = ((in[1] + 3) * 5) - 1;
    }
    {
        out[2] = ((in[2] - 7) * 2) + 4;
    }
    {
        out[3] = ((in[3] * 9) >> 2) + 1;
    }
    {
        out[4] = ((in[4] ^ 85) & 255) | 1;
    }
}
