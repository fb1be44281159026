// Locking protocol: the loop keeps flag=1, so the error guard is blocked.
0: lock=0;
   new=old+1;
   flag=1;
1: while(new!=old) {
2:   lock=1;
     old=new;
3:   if(*) {
4:     lock=0;
       new++;
     }
   }
5: if(!flag)
6:   lock=0;
7: if(lock==0)
8:   error();
9:
