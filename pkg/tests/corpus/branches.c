// Three guarded increments; the error guard is unreachable.
0: x=0;
1: if(*)
2:   x=x+1;
3: if(y>=1)
4:   x=x+2;
5: if(y<1)
6:   x=x+4;
7: if(x>5)
8:   error();
9:
