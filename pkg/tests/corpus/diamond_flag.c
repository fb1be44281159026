// Two independent diamonds; q=1 alone refutes the error guard.
1: q=1;
2: if(*)
3:   x=0;
   else
4:   x=1;
5: if(x>0)
6:   y=0;
   else
7:   y=1;
8: if(q==0)
9:   error();
10:
